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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "betaenc/encoder.hpp"
#include "betaenc/rational.hpp"

namespace betaenc {

// Normalization n_m of the deviation k(m) - m log2/log beta.
enum class Scaling { Sqrt, Linear, Custom };

struct LochsExperiment {
  Rational beta{3, 2};
  ThresholdProcess thresholds = ThresholdProcess::constant(Rational(1));
  std::vector<unsigned> m_values;
  std::size_t n_samples = 1000;
  std::uint64_t rng_seed = 0;
  Scaling scaling = Scaling::Linear;
  std::function<double(unsigned)> custom_scale;  // Scaling::Custom only
  // epsilons for C(eps) = log(2/eps)/log beta + 1 and for the deviation tails
  std::vector<Rational> eps{Rational(1, 2), Rational(1, 10), Rational(1, 100)};
  // Bits of the sampled dyadic inputs; defaults to the minimum admissible
  // precision plus 64.
  std::optional<unsigned long> precision_bits;
  unsigned workers = 1;
};

// Per-sample k values, indexed [sample][m index].
struct LochsSamples {
  std::vector<std::vector<std::size_t>> k;
  std::vector<std::vector<std::uint8_t>> exceeded;
  unsigned long precision_bits = 0;
};

struct EpsilonRow {
  Rational eps;
  double c_eps = 0;                 // C(eps)
  std::size_t above_c_eps = 0;      // #{k - m log2/log beta > C(eps)}, decided exactly
  double fraction_above_c_eps = 0;
  std::size_t deviation_tail = 0;   // #{|k - m log2/log beta| / n_m > eps}
  double deviation_tail_fraction = 0;
};

struct LochsRow {
  unsigned m = 0;
  double target = 0;  // log 2 / log beta
  double mean_k = 0;
  double mean_k_over_m = 0;
  double min_excess = 0;  // min over samples of k - m log2/log beta
  double max_excess = 0;
  std::vector<std::pair<double, double>> excess_quantiles;  // (level, value)
  std::size_t lower_bound_violations = 0;  // #{beta^k <= 2^m}, decided exactly
  std::size_t cap_exceeded = 0;
  double scale = 1;                // n_m
  double scaled_variance = 0;      // variance of (k - m log2/log beta) / n_m
  std::vector<EpsilonRow> by_eps;
};

struct LochsReport {
  Rational beta;
  std::string thresholds;
  std::string scaling;
  std::size_t n_samples = 0;
  std::uint64_t rng_seed = 0;
  unsigned long precision_bits = 0;
  // log2 of the bound on the probability that some sampled dyadic input
  // behaves differently from a real number at the probed depths.
  double log2_boundary_event_bound = 0;
  std::string prng;
  std::vector<LochsRow> rows;
};

// Minimal input precision for an experiment: ceil(4 max(m) log2/log beta).
unsigned long required_precision_bits(const Rational& beta, unsigned max_m);

// C(eps) = log(2/eps)/log beta + 1.
double c_of_eps(const Rational& beta, const Rational& eps);
// k - m log2/log beta > C(eps)  <=>  beta^(k-1) > 2^(m+1) / eps, exactly.
bool exceeds_c_eps(std::size_t k, unsigned m, const Rational& beta, const Rational& eps);

LochsSamples sample_k_values(const LochsExperiment& exp);
LochsReport summarize(const LochsExperiment& exp, const LochsSamples& samples);
LochsReport run_lochs(const LochsExperiment& exp);

// kbar(m) = ceil((1+eps) m log2/log beta), evaluated exactly as the least k
// with beta^k >= 2^((1+eps) m).
std::size_t kbar(const Rational& beta, unsigned m, const Rational& eps);

struct PmMeasure {
  Rational measure;         // lambda(P_m)
  std::size_t kbar = 0;
  std::size_t words = 0;    // attainable words of length kbar
  bool within_bound = false;  // measure <= 2 * 2^(-eps m), decided exactly
};

// lambda(P_m) for P_m = {x : I_kbar(u,x) not inside D_m(x)} with the
// constant threshold u, by exact enumeration of the attainable
// order-kbar cylinders and their input sets.
PmMeasure pm_measure_exact(const Rational& beta, const Rational& u, unsigned m,
                           const Rational& eps, std::size_t node_budget = std::size_t{1} << 22);
// Same with an explicit cylinder order instead of kbar(m).
PmMeasure pm_measure_at(const Rational& beta, const Rational& u, unsigned m, std::size_t order,
                        const Rational& eps, std::size_t node_budget = std::size_t{1} << 22);

// r <= 2 * 2^(-eps m), exactly, for rational eps.
bool below_two_pow(const Rational& r, const Rational& eps, unsigned m);

}  // namespace betaenc
