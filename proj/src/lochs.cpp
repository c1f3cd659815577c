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

#include "betaenc/lochs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "betaenc/converter.hpp"
#include "betaenc/errors.hpp"

namespace betaenc {
namespace {

double binary_rate(const Rational& beta) { return std::log(2.0) / std::log(beta.to_double()); }

// p^e and q^e of a rational.
void powers(const Rational& r, unsigned long e, mpz_class& num, mpz_class& den) {
  mpz_pow_ui(num.get_mpz_t(), r.mpq().get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), r.mpq().get_den_mpz_t(), e);
}

// Least k >= 1 with exceeds_c_eps(k, m, beta, eps).
std::size_t first_k_above_c_eps(unsigned m, const Rational& beta, const Rational& eps) {
  std::size_t k = 1;
  while (!exceeds_c_eps(k, m, beta, eps)) ++k;
  return k;
}

// Least k with beta^k > 2^m.
std::size_t first_k_above_rate(unsigned m, const Rational& beta) {
  std::size_t k = 1;
  while (!exceeds_binary_rate(k, m, beta)) ++k;
  return k;
}

std::string scaling_name(Scaling s) {
  switch (s) {
    case Scaling::Sqrt:
      return "sqrt";
    case Scaling::Linear:
      return "linear";
    case Scaling::Custom:
      return "custom";
  }
  return {};
}

}  // namespace

unsigned long required_precision_bits(const Rational& beta, unsigned max_m) {
  require_beta(beta);
  return static_cast<unsigned long>(std::ceil(4.0 * max_m * binary_rate(beta)));
}

double c_of_eps(const Rational& beta, const Rational& eps) {
  return std::log(2.0 / eps.to_double()) / std::log(beta.to_double()) + 1.0;
}

bool exceeds_c_eps(std::size_t k, unsigned m, const Rational& beta, const Rational& eps) {
  if (eps.sign() <= 0 || Rational(1) <= eps) throw DomainError("eps must lie in (0,1)");
  if (k == 0) return false;
  // beta^(k-1) * eps > 2^(m+1)
  mpz_class lhs, rhs;
  powers(beta, k - 1, lhs, rhs);
  lhs *= eps.mpq().get_num();
  rhs *= eps.mpq().get_den();
  rhs <<= (m + 1);
  return lhs > rhs;
}

LochsSamples sample_k_values(const LochsExperiment& exp) {
  require_beta(exp.beta);
  if (exp.m_values.empty()) throw ConfigError("no m values given");
  for (std::size_t i = 0; i < exp.m_values.size(); ++i) {
    if (exp.m_values[i] < 1 || (i > 0 && exp.m_values[i] <= exp.m_values[i - 1])) {
      throw ConfigError("m values must be positive and strictly increasing");
    }
  }
  if (exp.n_samples < 1) throw ConfigError("n_samples must be >= 1");
  exp.thresholds.validate(exp.beta);
  const unsigned max_m = exp.m_values.back();
  const unsigned long required = required_precision_bits(exp.beta, max_m);
  const unsigned long precision = exp.precision_bits.value_or(required + 64);
  if (precision < required || precision <= max_m) {
    throw ConfigError("input precision of " + std::to_string(precision) +
                      " bits is insufficient for m = " + std::to_string(max_m) + " (need >= " +
                      std::to_string(std::max<unsigned long>(required, max_m + 1)) + ")");
  }

  LochsSamples out;
  out.precision_bits = precision;
  out.k.assign(exp.n_samples, {});
  out.exceeded.assign(exp.n_samples, {});
  const Prng root(exp.rng_seed);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Prng rng = root.split(i);
      const Rational x = rng.uniform_dyadic(precision);
      const std::uint64_t run_seed = rng.next();
      const auto values = k_of_m_all(x, exp.m_values, exp.beta, exp.thresholds, run_seed);
      auto& ks = out.k[i];
      auto& ex = out.exceeded[i];
      ks.reserve(values.size());
      ex.reserve(values.size());
      for (const auto& v : values) {
        ks.push_back(v.k);
        ex.push_back(v.exceeded ? 1 : 0);
      }
    }
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(exp.workers, exp.n_samples));
  if (workers == 1) {
    work(0, exp.n_samples);
    return out;
  }
  std::vector<std::thread> threads;
  const std::size_t chunk = (exp.n_samples + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(exp.n_samples, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back(work, begin, end);
  }
  for (auto& t : threads) t.join();
  return out;
}

LochsReport summarize(const LochsExperiment& exp, const LochsSamples& samples) {
  LochsReport report;
  report.beta = exp.beta;
  report.thresholds = exp.thresholds.describe();
  report.scaling = scaling_name(exp.scaling);
  report.n_samples = samples.k.size();
  report.rng_seed = exp.rng_seed;
  report.precision_bits = samples.precision_bits;
  report.prng = std::string(Prng::kAlgorithm);

  const double rate = binary_rate(exp.beta);
  const double n = static_cast<double>(samples.k.size());
  std::size_t max_k = 0;

  for (std::size_t j = 0; j < exp.m_values.size(); ++j) {
    const unsigned m = exp.m_values[j];
    LochsRow row;
    row.m = m;
    row.target = rate;
    switch (exp.scaling) {
      case Scaling::Sqrt:
        row.scale = std::sqrt(static_cast<double>(m));
        break;
      case Scaling::Linear:
        row.scale = m;
        break;
      case Scaling::Custom:
        if (!exp.custom_scale) throw ConfigError("custom scaling without a scale function");
        row.scale = exp.custom_scale(m);
        break;
    }
    const std::size_t k_lower = first_k_above_rate(m, exp.beta);

    std::vector<double> excess;
    excess.reserve(samples.k.size());
    double sum_k = 0;
    for (std::size_t i = 0; i < samples.k.size(); ++i) {
      const std::size_t k = samples.k[i][j];
      max_k = std::max(max_k, k);
      sum_k += static_cast<double>(k);
      excess.push_back(static_cast<double>(k) - m * rate);
      if (k < k_lower) ++row.lower_bound_violations;
      if (samples.exceeded[i][j]) ++row.cap_exceeded;
    }
    row.mean_k = sum_k / n;
    row.mean_k_over_m = row.mean_k / m;

    std::vector<double> sorted = excess;
    std::sort(sorted.begin(), sorted.end());
    row.min_excess = sorted.front();
    row.max_excess = sorted.back();
    for (double level : {0.5, 0.9, 0.99}) {
      const auto rank = static_cast<std::size_t>(std::ceil(level * n));
      row.excess_quantiles.emplace_back(level, sorted[std::max<std::size_t>(rank, 1) - 1]);
    }

    double mean_scaled = 0;
    for (double e : sorted) mean_scaled += e / row.scale;
    mean_scaled /= n;
    double var = 0;
    for (double e : sorted) var += (e / row.scale - mean_scaled) * (e / row.scale - mean_scaled);
    row.scaled_variance = var / n;

    for (const auto& eps : exp.eps) {
      EpsilonRow er;
      er.eps = eps;
      er.c_eps = c_of_eps(exp.beta, eps);
      const std::size_t k_star = first_k_above_c_eps(m, exp.beta, eps);
      const double eps_d = eps.to_double();
      for (std::size_t i = 0; i < samples.k.size(); ++i) {
        if (samples.k[i][j] >= k_star) ++er.above_c_eps;
        if (std::fabs(excess[i]) / row.scale > eps_d) ++er.deviation_tail;
      }
      er.fraction_above_c_eps = static_cast<double>(er.above_c_eps) / n;
      er.deviation_tail_fraction = static_cast<double>(er.deviation_tail) / n;
      row.by_eps.push_back(std::move(er));
    }
    report.rows.push_back(std::move(row));
  }
  report.log2_boundary_event_bound =
      static_cast<double>(max_k) + 1.0 - static_cast<double>(samples.precision_bits);
  return report;
}

LochsReport run_lochs(const LochsExperiment& exp) { return summarize(exp, sample_k_values(exp)); }

std::size_t kbar(const Rational& beta, unsigned m, const Rational& eps) {
  require_beta(beta);
  if (eps.sign() < 0) throw DomainError("eps must be nonnegative");
  // beta^(k b) >= 2^((a+b) m) with eps = a/b
  const unsigned long a = eps.numerator().get_ui();
  const unsigned long b = eps.denominator().get_ui();
  const unsigned long shift = (a + b) * m;
  const auto estimate =
      static_cast<std::size_t>(std::floor((1.0 + eps.to_double()) * m * binary_rate(beta)));
  std::size_t k = estimate > 2 ? estimate - 2 : 0;
  mpz_class lhs, rhs;
  while (true) {
    powers(beta, k * b, lhs, rhs);
    rhs <<= shift;
    if (lhs >= rhs) return k;
    ++k;
  }
}

bool below_two_pow(const Rational& r, const Rational& eps, unsigned m) {
  if (r.sign() < 0) throw DomainError("below_two_pow: negative value");
  // (r/2)^b <= 2^(-a m)
  const unsigned long a = eps.numerator().get_ui();
  const unsigned long b = eps.denominator().get_ui();
  const Rational lhs = (r / Rational(2)).pow(static_cast<long>(b));
  return lhs <= pow2(-static_cast<long>(a * m));
}

PmMeasure pm_measure_at(const Rational& beta, const Rational& u, unsigned m, std::size_t order,
                        const Rational& eps, std::size_t node_budget) {
  require_beta(beta);
  if (m < 1) throw DomainError("m must be >= 1");
  ThresholdProcess::constant(u).validate(beta);
  const std::vector<Rational> betas(order, beta);
  const std::vector<Rational> thresholds(order, u);
  const auto preimages = word_preimages(betas, thresholds, node_budget);
  PmMeasure result;
  result.kbar = order;
  result.words = preimages.size();
  result.measure = Rational(0);
  for (const auto& entry : preimages) {
    if (!enclosing_cell(beta_cylinder(entry.word, beta), m)) {
      result.measure += entry.node.measure();
    }
  }
  result.within_bound = below_two_pow(result.measure, eps, m);
  return result;
}

PmMeasure pm_measure_exact(const Rational& beta, const Rational& u, unsigned m,
                           const Rational& eps, std::size_t node_budget) {
  return pm_measure_at(beta, u, m, kbar(beta, m, eps), eps, node_budget);
}

}  // namespace betaenc
