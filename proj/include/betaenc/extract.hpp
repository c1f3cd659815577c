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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "betaenc/rational.hpp"

namespace betaenc {

// Exact probability law on {0,1}^n; words packed with the first bit most
// significant.
class FiniteDistribution {
 public:
  FiniteDistribution(unsigned n, std::map<std::uint64_t, Rational> entries);

  static FiniteDistribution uniform(unsigned n);
  static FiniteDistribution point_mass(unsigned n, std::uint64_t word);
  // Uniform on a set of distinct words.
  static FiniteDistribution flat(unsigned n, std::span<const std::uint64_t> support);

  unsigned n() const { return n_; }
  const std::map<std::uint64_t, Rational>& entries() const { return entries_; }
  Rational probability(std::uint64_t word) const;
  Rational max_probability() const;
  double min_entropy() const;
  // H_inf >= k for rational k >= 0, exactly.
  bool min_entropy_at_least(const Rational& k) const;
  // Law of f(X) on {0,1}^out_bits.
  FiniteDistribution push_forward(const std::function<std::uint64_t(std::uint64_t)>& f,
                                  unsigned out_bits) const;

 private:
  unsigned n_;
  std::map<std::uint64_t, Rational> entries_;
};

// (1/2) sum_w |p(w) - q(w)|.
Rational tv_distance(const FiniteDistribution& p, const FiniteDistribution& q);

// Uniform law on the larger of {x : ext(x) = 0} and {x : ext(x) = 1} (ties
// go to the 0-set). It has min-entropy >= m - 1 while ext is constant on it.
FiniteDistribution adversarial_source(const std::function<std::uint8_t(std::uint64_t)>& ext,
                                      unsigned m, unsigned max_m = 24);

// Toeplitz hashing {0,1}^m x {0,1}^(m+n-1) -> {0,1}^n over GF(2):
// y_i = XOR_j z_(j - i + n) x_j (1-based), i.e. the first row of the matrix is
// z_n..z_(m+n-1) and the first column z_n down to z_1.
std::vector<std::uint8_t> seeded_extract(std::span<const std::uint8_t> x,
                                         std::span<const std::uint8_t> z, unsigned n);

// Packed form of seeded_extract for m + n - 1 <= 64.
class ToeplitzHash {
 public:
  ToeplitzHash(unsigned m, unsigned n, std::uint64_t seed);
  std::uint64_t operator()(std::uint64_t x) const;

 private:
  unsigned n_;
  std::vector<std::uint64_t> rows_;
};

// <x, y> mod 2.
std::uint8_t two_source_extract(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y);

// E_z d_TV(Ext(X, z), U_n) over all 2^(m+n-1) seeds for X flat on `support`;
// equal to d_TV((Z, Ext(X,Z)), Z x U_n).
Rational seeded_average_tv(std::span<const std::uint64_t> support, unsigned m, unsigned n);

// tv <= (1/2) sqrt(2^(n - k)), exactly.
bool within_leftover_hash_bound(const Rational& tv, unsigned n, unsigned k);

// d_TV(<X,Y>, U_1) for independent flat X, Y on {0,1}^m.
Rational two_source_tv(std::span<const std::uint64_t> x_support,
                       std::span<const std::uint64_t> y_support, unsigned m);

struct WorstPartner {
  Rational tv;
  std::vector<std::uint64_t> support;
};

// max over all flat Y with |Y| = size of d_TV(<X,Y>, U_1); exact and
// exhaustive (the optimum takes the `size` words with the most extreme
// character sums).
WorstPartner worst_flat_partner(std::span<const std::uint64_t> x_support, unsigned m,
                                std::size_t size);

// H_inf(X) + H_inf(Y) >= m + 2 + 2 log2(1/eps) for flat X, Y of the given
// sizes: |X| |Y| eps^2 >= 2^(m+2).
bool two_source_precondition(std::size_t x_size, std::size_t y_size, unsigned m,
                             const Rational& eps);

enum class ExtractMode { Seeded, TwoSource };

struct PipelineConfig {
  ExtractMode mode = ExtractMode::Seeded;
  unsigned block_bits = 64;  // m
  unsigned gap_bits = 0;     // g
  unsigned output_bits = 8;  // n per block (seeded) or per block pair (two-source)
  Rational beta_min{3, 2};
  Rational beta_max{3, 2};
  // Seeded mode: m + n - 1 uniform seed bits. When absent the seed is cut
  // from the head of the stream (weak seed, no uniformity claim).
  std::optional<std::vector<std::uint8_t>> seed;
  Rational eps{1, 100};  // two-source target
};

struct PipelineReport {
  std::string mode;
  unsigned block_bits = 0;
  unsigned gap_bits = 0;
  unsigned output_bits = 0;
  std::string seed_source;
  double entropy_budget = 0;  // m log2(beta_min) - log2(kappa)
  // Seeded: (1/2) sqrt(2^(n-k)); two-source: (1/2) sqrt(2^(m - 2k)).
  double eps_bound = 0;
  double rate_overhead = 0;   // m / (n log2 / log beta_min)
  std::size_t blocks_used = 0;
  std::size_t bits_out = 0;
  std::vector<std::string> warnings;
};

struct PipelineResult {
  std::vector<std::uint8_t> bits;
  PipelineReport report;
};

// Cuts the stream into m-bit blocks separated by g-bit gaps and extracts n
// bits per block (seeded) or one bit per consecutive block pair
// (two-source). Throws ConfigError when n exceeds the entropy budget.
PipelineResult pipeline_extract(std::span<const std::uint8_t> stream, const PipelineConfig& config);

// n <= m log2(beta_min) - log2(kappa), i.e. 2^n kappa <= beta_min^m.
bool within_entropy_budget(unsigned n, unsigned m, const Rational& beta_min,
                           const Rational& beta_max);

// ceil(n log2 / log beta_min / (1 - alpha)).
unsigned block_length_for_rate(unsigned n, const Rational& alpha, const Rational& beta_min);

// beta_min^2 > 2.
bool supports_two_source(const Rational& beta_min);

}  // namespace betaenc
