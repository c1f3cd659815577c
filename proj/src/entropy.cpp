// Copyright 2026 The betaenc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "betaenc/entropy.hpp"

#include <mpfr.h>

#include <cmath>
#include <vector>

#include "betaenc/errors.hpp"

namespace betaenc {
namespace {

struct Branch {
  Rational beta;
  Rational weight;
};

class Enumerator {
 public:
  Enumerator(const BetaProcess& betas, const ThresholdProcess& thresholds, unsigned m)
      : betas_(betas), m_(m) {
    for (unsigned n = 0; n < m; ++n) {
      thresholds_.push_back(thresholds.kind() == ThresholdProcess::Kind::Constant
                                ? thresholds.lo()
                                : thresholds.values().at(n));
    }
  }

  std::map<std::uint64_t, Rational> run() {
    visit(PreimageNode{}, Rational(1), 0, 0);
    return std::move(out_);
  }

 private:
  std::vector<Branch> branches(unsigned n) const {
    switch (betas_.kind()) {
      case BetaProcess::Kind::Fixed:
        return {{betas_.values().front(), Rational(1)}};
      case BetaProcess::Kind::ExplicitSequence:
        return {{betas_.values().at(n), Rational(1)}};
      case BetaProcess::Kind::IidFiniteSupport: {
        std::vector<Branch> out;
        for (std::size_t i = 0; i < betas_.values().size(); ++i) {
          if (betas_.probabilities()[i].sign() > 0) {
            out.push_back({betas_.values()[i], betas_.probabilities()[i]});
          }
        }
        return out;
      }
      case BetaProcess::Kind::Seeded:
        break;
    }
    throw ConfigError("exact word distribution needs a finite-support beta model");
  }

  void visit(const PreimageNode& node, const Rational& weight, std::uint64_t word, unsigned depth) {
    if (depth == m_) {
      auto [it, inserted] = out_.try_emplace(word, Rational(0));
      it->second += weight * node.measure();
      return;
    }
    for (const auto& branch : branches(depth)) {
      const Rational w = weight * branch.weight;
      auto [zero, one] = node.split(branch.beta, thresholds_[depth]);
      if (zero) visit(*zero, w, word << 1, depth + 1);
      if (one) visit(*one, w, (word << 1) | 1u, depth + 1);
    }
  }

  const BetaProcess& betas_;
  unsigned m_;
  std::vector<Rational> thresholds_;
  std::map<std::uint64_t, Rational> out_;
};

}  // namespace

WordDistribution::WordDistribution(unsigned m, std::map<std::uint64_t, Rational> entries)
    : m_(m), entries_(std::move(entries)) {
  if (m < 1 || m > 63) throw DomainError("word length must lie in [1, 63]");
  for (const auto& [word, p] : entries_) {
    if (word >> m) throw DomainError("word outside {0,1}^m");
    if (p.sign() < 0) throw DomainError("negative probability");
  }
}

Rational WordDistribution::probability(std::uint64_t word) const {
  const auto it = entries_.find(word);
  return it == entries_.end() ? Rational(0) : it->second;
}

Rational WordDistribution::total() const {
  Rational sum(0);
  for (const auto& [word, p] : entries_) sum += p;
  return sum;
}

Rational WordDistribution::max_probability() const {
  Rational best(0);
  for (const auto& [word, p] : entries_) best = max(best, p);
  return best;
}

std::string WordDistribution::min_entropy_decimal(int digits) const {
  const Rational top = max_probability();
  if (top.is_zero()) throw DomainError("empty distribution");
  mpfr_t v;
  mpfr_init2(v, static_cast<mpfr_prec_t>(digits * 3.33) + 64);
  mpfr_set_q(v, top.mpq().get_mpq_t(), MPFR_RNDN);
  mpfr_log2(v, v, MPFR_RNDN);
  mpfr_neg(v, v, MPFR_RNDN);
  char* text = nullptr;
  mpfr_asprintf(&text, "%.*Rf", digits, v);
  std::string out(text);
  mpfr_free_str(text);
  mpfr_clear(v);
  return out;
}

double WordDistribution::min_entropy() const { return -std::log2(max_probability().to_double()); }

WordDistribution WordDistribution::marginal() const {
  if (m_ < 2) throw DomainError("marginal of a length-1 distribution");
  std::map<std::uint64_t, Rational> out;
  for (const auto& [word, p] : entries_) {
    auto [it, inserted] = out.try_emplace(word >> 1, Rational(0));
    it->second += p;
  }
  return WordDistribution(m_ - 1, std::move(out));
}

std::string WordDistribution::word_string(std::uint64_t word) const {
  std::string s(m_, '0');
  for (unsigned i = 0; i < m_; ++i) {
    if ((word >> (m_ - 1 - i)) & 1u) s[i] = '1';
  }
  return s;
}

WordDistribution word_distribution(const BetaProcess& betas, const ThresholdProcess& thresholds,
                                   unsigned m, const EntropyOptions& options) {
  if (m < 1 || m > 63) throw DomainError("word length must lie in [1, 63]");
  if (!betas.is_finite_support()) {
    throw ConfigError("exact word distribution needs a finite-support beta model");
  }
  const bool unit_threshold = thresholds.kind() == ThresholdProcess::Kind::Constant &&
                              thresholds.lo() == Rational(1);
  if (!unit_threshold) {
    if (!options.allow_general_thresholds) {
      throw ConfigError("thresholds other than the constant 1 need allow_general_thresholds");
    }
    if (thresholds.kind() != ThresholdProcess::Kind::Constant &&
        thresholds.kind() != ThresholdProcess::Kind::ExplicitSequence) {
      throw ConfigError("exact word distribution needs deterministic thresholds");
    }
    if (thresholds.kind() == ThresholdProcess::Kind::ExplicitSequence &&
        thresholds.values().size() < m) {
      throw ConfigError("explicit threshold sequence shorter than m");
    }
  }
  thresholds.validate(betas.beta_max());
  if (betas.kind() == BetaProcess::Kind::ExplicitSequence && betas.values().size() < m) {
    throw ConfigError("explicit beta sequence shorter than m");
  }

  const double support =
      betas.kind() == BetaProcess::Kind::IidFiniteSupport ? betas.values().size() : 1.0;
  const double nodes = std::pow(2.0 * support, static_cast<double>(m));
  if (nodes > static_cast<double>(options.budget)) {
    throw ResourceError("exact enumeration needs (2*" + std::to_string(int(support)) + ")^" +
                        std::to_string(m) + " nodes, over the budget of " +
                        std::to_string(options.budget));
  }
  return WordDistribution(m, Enumerator(betas, thresholds, m).run());
}

BoundCheck min_entropy_bound_check(const WordDistribution& dist, const Rational& beta_min,
                                   const Rational& kappa) {
  require_beta(beta_min);
  BoundCheck check;
  check.max_probability = dist.max_probability();
  check.bound = kappa / beta_min.pow(dist.m());
  check.slack = check.bound - check.max_probability;
  check.holds = check.slack.sign() >= 0;
  return check;
}

bool is_mk_source(const WordDistribution& dist, const Rational& k) {
  if (k.sign() < 0) throw DomainError("min-entropy threshold must be nonnegative");
  // max <= 2^(-a/b)  <=>  max^b <= 2^-a
  const Rational top = dist.max_probability();
  const long b = k.denominator().get_si();
  const mpz_class a = k.numerator();
  if (!a.fits_slong_p()) throw DomainError("min-entropy threshold too large");
  return top.pow(b) <= pow2(-a.get_si());
}

bool is_mk_source(const WordDistribution& dist, const Rational& beta_min, const Rational& kappa) {
  return min_entropy_bound_check(dist, beta_min, kappa).holds;
}

}  // namespace betaenc
