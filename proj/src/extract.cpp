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

#include "betaenc/extract.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "betaenc/errors.hpp"

namespace betaenc {
namespace {

void require_word_length(unsigned n, unsigned max_bits = 63) {
  if (n > max_bits) throw DomainError("word length " + std::to_string(n) + " too large");
}

std::uint8_t parity(std::uint64_t v) { return static_cast<std::uint8_t>(std::popcount(v) & 1); }

}  // namespace

// ---------------------------------------------------------------------------
// FiniteDistribution

FiniteDistribution::FiniteDistribution(unsigned n, std::map<std::uint64_t, Rational> entries)
    : n_(n), entries_(std::move(entries)) {
  require_word_length(n);
  Rational total(0);
  for (const auto& [word, p] : entries_) {
    if (n < 64 && (word >> n)) throw DomainError("word outside {0,1}^n");
    if (p.sign() < 0) throw DomainError("negative probability");
    total += p;
  }
  if (total != Rational(1)) throw DomainError("probabilities sum to " + total.str());
}

FiniteDistribution FiniteDistribution::uniform(unsigned n) {
  require_word_length(n, 24);
  std::map<std::uint64_t, Rational> entries;
  const Rational p = pow2(-static_cast<long>(n));
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) entries.emplace_hint(entries.end(), w, p);
  return FiniteDistribution(n, std::move(entries));
}

FiniteDistribution FiniteDistribution::point_mass(unsigned n, std::uint64_t word) {
  return FiniteDistribution(n, {{word, Rational(1)}});
}

FiniteDistribution FiniteDistribution::flat(unsigned n, std::span<const std::uint64_t> support) {
  if (support.empty()) throw DomainError("flat distribution on an empty set");
  std::map<std::uint64_t, Rational> entries;
  const Rational p(1, static_cast<long>(support.size()));
  for (auto w : support) {
    if (!entries.emplace(w, p).second) throw DomainError("flat support has duplicate words");
  }
  return FiniteDistribution(n, std::move(entries));
}

Rational FiniteDistribution::probability(std::uint64_t word) const {
  const auto it = entries_.find(word);
  return it == entries_.end() ? Rational(0) : it->second;
}

Rational FiniteDistribution::max_probability() const {
  Rational best(0);
  for (const auto& [word, p] : entries_) best = max(best, p);
  return best;
}

double FiniteDistribution::min_entropy() const { return -std::log2(max_probability().to_double()); }

bool FiniteDistribution::min_entropy_at_least(const Rational& k) const {
  if (k.sign() < 0) throw DomainError("min-entropy threshold must be nonnegative");
  const long b = k.denominator().get_si();
  return max_probability().pow(b) <= pow2(-k.numerator().get_si());
}

FiniteDistribution FiniteDistribution::push_forward(
    const std::function<std::uint64_t(std::uint64_t)>& f, unsigned out_bits) const {
  std::map<std::uint64_t, Rational> out;
  for (const auto& [word, p] : entries_) {
    auto [it, inserted] = out.try_emplace(f(word), Rational(0));
    it->second += p;
  }
  return FiniteDistribution(out_bits, std::move(out));
}

Rational tv_distance(const FiniteDistribution& p, const FiniteDistribution& q) {
  if (p.n() != q.n()) {
    throw DomainError("tv_distance: word lengths " + std::to_string(p.n()) + " and " +
                      std::to_string(q.n()) + " differ");
  }
  Rational sum(0);
  auto a = p.entries().begin();
  auto b = q.entries().begin();
  while (a != p.entries().end() || b != q.entries().end()) {
    if (b == q.entries().end() || (a != p.entries().end() && a->first < b->first)) {
      sum += a->second;
      ++a;
    } else if (a == p.entries().end() || b->first < a->first) {
      sum += b->second;
      ++b;
    } else {
      sum += (a->second - b->second).abs();
      ++a;
      ++b;
    }
  }
  return sum / Rational(2);
}

FiniteDistribution adversarial_source(const std::function<std::uint8_t(std::uint64_t)>& ext,
                                      unsigned m, unsigned max_m) {
  if (m < 1) throw DomainError("m must be >= 1");
  if (m > max_m) {
    throw ResourceError("adversarial_source: 2^" + std::to_string(m) +
                        " words exceed the enumeration budget of 2^" + std::to_string(max_m));
  }
  std::vector<std::uint64_t> zeros, ones;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
    (ext(x) ? ones : zeros).push_back(x);
  }
  return FiniteDistribution::flat(m, zeros.size() >= ones.size() ? zeros : ones);
}

// ---------------------------------------------------------------------------
// Extractors

std::vector<std::uint8_t> seeded_extract(std::span<const std::uint8_t> x,
                                         std::span<const std::uint8_t> z, unsigned n) {
  const std::size_t m = x.size();
  if (n > m) throw DomainError("output length exceeds input length");
  if (n > 0 && z.size() != m + n - 1) {
    throw DomainError("seed length " + std::to_string(z.size()) + " != m + n - 1 = " +
                      std::to_string(m + n - 1));
  }
  std::vector<std::uint8_t> y(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t acc = 0;
    for (std::size_t j = 0; j < m; ++j) {
      acc ^= static_cast<std::uint8_t>(z[j + n - 1 - i] & x[j] & 1u);
    }
    y[i] = acc;
  }
  return y;
}

ToeplitzHash::ToeplitzHash(unsigned m, unsigned n, std::uint64_t seed) : n_(n), rows_(n, 0) {
  if (n < 1 || n > m || m + n - 1 > 64) throw DomainError("ToeplitzHash: unsupported shape");
  const unsigned d = m + n - 1;
  for (unsigned i = 0; i < n; ++i) {
    std::uint64_t mask = 0;
    for (unsigned j = 0; j < m; ++j) {
      const unsigned t = j + n - 1 - i;  // 0-based seed index
      const std::uint64_t z = (seed >> (d - 1 - t)) & 1u;
      mask |= z << (m - 1 - j);
    }
    rows_[i] = mask;
  }
}

std::uint64_t ToeplitzHash::operator()(std::uint64_t x) const {
  std::uint64_t y = 0;
  for (unsigned i = 0; i < n_; ++i) y = (y << 1) | parity(rows_[i] & x);
  return y;
}

std::uint8_t two_source_extract(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) {
  if (x.size() != y.size()) {
    throw DomainError("two_source_extract: lengths " + std::to_string(x.size()) + " and " +
                      std::to_string(y.size()) + " differ");
  }
  std::uint8_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc ^= static_cast<std::uint8_t>(x[i] & y[i] & 1u);
  return acc;
}

Rational seeded_average_tv(std::span<const std::uint64_t> support, unsigned m, unsigned n) {
  if (support.empty()) throw DomainError("empty source support");
  if (n < 1 || n > m || m + n - 1 > 24) throw ResourceError("seed space too large to enumerate");
  const unsigned d = m + n - 1;
  const std::uint64_t seeds = std::uint64_t{1} << d;
  const std::uint64_t outputs = std::uint64_t{1} << n;
  const std::uint64_t size = support.size();
  std::vector<std::uint64_t> counts(outputs);
  mpz_class total = 0;
  for (std::uint64_t z = 0; z < seeds; ++z) {
    const ToeplitzHash hash(m, n, z);
    std::fill(counts.begin(), counts.end(), 0);
    for (auto x : support) ++counts[hash(x)];
    std::uint64_t deviation = 0;
    for (auto c : counts) {
      const std::uint64_t scaled = c << n;
      deviation += scaled > size ? scaled - size : size - scaled;
    }
    total += mpz_class(static_cast<unsigned long>(deviation));
  }
  // sum_z sum_w |c 2^n - |S|| / (2^d * 2 |S| 2^n)
  mpz_class denominator = mpz_class(static_cast<unsigned long>(size)) * 2;
  denominator <<= (d + n);
  return Rational(total, denominator);
}

bool within_leftover_hash_bound(const Rational& tv, unsigned n, unsigned k) {
  // (2 tv)^2 <= 2^(n-k)
  const Rational doubled = tv * Rational(2);
  return doubled * doubled <= pow2(static_cast<long>(n) - static_cast<long>(k));
}

namespace {

// f(y) = sum_{x in S} (-1)^<x,y> for all y in {0,1}^m.
std::vector<long> character_sums(std::span<const std::uint64_t> x_support, unsigned m) {
  std::vector<long> f(std::size_t{1} << m, 0);
  for (std::uint64_t y = 0; y < f.size(); ++y) {
    long s = 0;
    for (auto x : x_support) s += parity(x & y) ? -1 : 1;
    f[y] = s;
  }
  return f;
}

}  // namespace

Rational two_source_tv(std::span<const std::uint64_t> x_support,
                       std::span<const std::uint64_t> y_support, unsigned m) {
  if (x_support.empty() || y_support.empty()) throw DomainError("empty source support");
  require_word_length(m, 24);
  long bias = 0;
  for (auto y : y_support) {
    for (auto x : x_support) bias += parity(x & y) ? -1 : 1;
  }
  // |P(0) - P(1)| / 2
  return Rational(std::labs(bias), 2L * static_cast<long>(x_support.size() * y_support.size()));
}

WorstPartner worst_flat_partner(std::span<const std::uint64_t> x_support, unsigned m,
                                std::size_t size) {
  require_word_length(m, 20);
  const std::size_t words = std::size_t{1} << m;
  if (size < 1 || size > words) throw DomainError("partner size out of range");
  const auto f = character_sums(x_support, m);
  std::vector<std::uint64_t> order(words);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint64_t a, std::uint64_t b) { return f[a] > f[b]; });
  long top = 0, bottom = 0;
  for (std::size_t i = 0; i < size; ++i) {
    top += f[order[i]];
    bottom += f[order[words - 1 - i]];
  }
  WorstPartner worst;
  const bool use_top = std::labs(top) >= std::labs(bottom);
  const long best = use_top ? std::labs(top) : std::labs(bottom);
  worst.tv = Rational(best, 2L * static_cast<long>(x_support.size() * size));
  for (std::size_t i = 0; i < size; ++i) {
    worst.support.push_back(use_top ? order[i] : order[words - 1 - i]);
  }
  std::sort(worst.support.begin(), worst.support.end());
  return worst;
}

bool two_source_precondition(std::size_t x_size, std::size_t y_size, unsigned m,
                             const Rational& eps) {
  const Rational lhs = Rational(static_cast<long>(x_size)) * Rational(static_cast<long>(y_size)) *
                       eps * eps;
  return pow2(static_cast<long>(m) + 2) <= lhs;
}

// ---------------------------------------------------------------------------
// Pipeline

bool within_entropy_budget(unsigned n, unsigned m, const Rational& beta_min,
                           const Rational& beta_max) {
  const Rational kappa = (beta_max - Rational(1)).inverse();
  return pow2(n) * kappa <= beta_min.pow(m);
}

unsigned block_length_for_rate(unsigned n, const Rational& alpha, const Rational& beta_min) {
  if (alpha.sign() < 0 || Rational(1) <= alpha) throw DomainError("alpha must lie in [0,1)");
  const double m = n * std::log(2.0) / std::log(beta_min.to_double()) / (1.0 - alpha.to_double());
  return static_cast<unsigned>(std::ceil(m));
}

bool supports_two_source(const Rational& beta_min) { return Rational(2) < beta_min * beta_min; }

PipelineResult pipeline_extract(std::span<const std::uint8_t> stream, const PipelineConfig& config) {
  if (config.beta_max < config.beta_min) throw ConfigError("beta_min > beta_max");
  if (config.beta_min <= Rational(1) || Rational(2) <= config.beta_max) {
    throw ConfigError("beta range must lie inside (1,2)");
  }
  const unsigned m = config.block_bits;
  const unsigned n = config.output_bits;
  if (m < 1) throw ConfigError("block length must be >= 1");

  PipelineResult result;
  PipelineReport& report = result.report;
  report.mode = config.mode == ExtractMode::Seeded ? "seeded" : "two-source";
  report.block_bits = m;
  report.gap_bits = config.gap_bits;
  report.output_bits = n;
  const double log2_beta_min = std::log2(config.beta_min.to_double());
  const double log2_kappa = -std::log2(config.beta_max.to_double() - 1.0);
  report.entropy_budget = m * log2_beta_min - log2_kappa;
  report.rate_overhead = n == 0 ? 0.0 : m * log2_beta_min / n;

  if (n > 0 && !within_entropy_budget(n, m, config.beta_min, config.beta_max)) {
    throw ConfigError("n = " + std::to_string(n) + " exceeds the entropy budget k = " +
                      std::to_string(report.entropy_budget) + " of an " + std::to_string(m) +
                      "-bit block");
  }
  if (n == 0) {
    report.seed_source = "none";
    return result;
  }

  const std::size_t stride = static_cast<std::size_t>(m) + config.gap_bits;
  std::size_t offset = 0;

  if (config.mode == ExtractMode::Seeded) {
    if (n > m) throw ConfigError("output length exceeds block length");
    std::vector<std::uint8_t> seed;
    if (config.seed) {
      seed = *config.seed;
      report.seed_source = "explicit";
    } else {
      if (stream.size() < m + n - 1) throw ConfigError("stream too short for a seed block");
      seed.assign(stream.begin(), stream.begin() + (m + n - 1));
      offset = m + n - 1 + config.gap_bits;
      report.seed_source = "stream-head (experimental weak seed)";
      report.warnings.push_back(
          "seed cut from the encoder stream: weak-seed mode, no closeness-to-uniform claim");
    }
    if (seed.size() != m + n - 1) {
      throw ConfigError("seed must have m + n - 1 = " + std::to_string(m + n - 1) + " bits");
    }
    report.eps_bound = 0.5 * std::sqrt(std::exp2(n - report.entropy_budget));
    for (; offset + m <= stream.size(); offset += stride) {
      const auto y = seeded_extract(stream.subspan(offset, m), seed, n);
      result.bits.insert(result.bits.end(), y.begin(), y.end());
      ++report.blocks_used;
    }
  } else {
    if (n != 1) throw ConfigError("two-source mode emits exactly one bit per block pair");
    report.seed_source = "second block";
    report.rate_overhead = 2.0 * m * log2_beta_min;
    report.eps_bound = 0.5 * std::sqrt(std::exp2(m - 2.0 * report.entropy_budget));
    if (!supports_two_source(config.beta_min)) {
      report.warnings.push_back(
          "two-source extraction requires beta_min > sqrt(2): two blocks carry at most 2 m "
          "log2(beta_min) bits of min-entropy, which does not exceed m");
    }
    const double log2_inv_eps = -std::log2(config.eps.to_double());
    if (2.0 * report.entropy_budget < m + 2.0 + 2.0 * log2_inv_eps) {
      report.warnings.push_back(
          "block pair min-entropy 2k is below m + 2 + 2 log2(1/eps); no eps-closeness guarantee");
    }
    for (; offset + stride + m <= stream.size(); offset += 2 * stride) {
      result.bits.push_back(
          two_source_extract(stream.subspan(offset, m), stream.subspan(offset + stride, m)));
      report.blocks_used += 2;
    }
  }
  report.bits_out = result.bits.size();
  return result;
}

}  // namespace betaenc
