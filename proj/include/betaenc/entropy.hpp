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
#include <map>
#include <string>

#include "betaenc/encoder.hpp"
#include "betaenc/rational.hpp"

namespace betaenc {

// Exact law P_m of the first m encoder bits. Words are packed with b_1 as
// the most significant of the m bits; absent words have probability 0.
class WordDistribution {
 public:
  WordDistribution(unsigned m, std::map<std::uint64_t, Rational> entries);

  unsigned m() const { return m_; }
  const std::map<std::uint64_t, Rational>& entries() const { return entries_; }
  Rational probability(std::uint64_t word) const;
  Rational total() const;
  Rational max_probability() const;
  // -log2(max probability) with `digits` digits after the decimal point.
  std::string min_entropy_decimal(int digits = 50) const;
  double min_entropy() const;
  // P_m obtained by summing out the last bit (m >= 2).
  WordDistribution marginal() const;
  std::string word_string(std::uint64_t word) const;

 private:
  unsigned m_;
  std::map<std::uint64_t, Rational> entries_;
};

struct EntropyOptions {
  // Thresholds other than the constant 1 are accepted only when set.
  bool allow_general_thresholds = false;
  std::size_t budget = std::size_t{1} << 24;
};

// P_m(c) = sum over beta realizations (weighted by their probability) of
// the Lebesgue measure of {x in [0,1] : b_1..b_m = c}, by forward splitting
// of input intervals.
WordDistribution word_distribution(const BetaProcess& betas, const ThresholdProcess& thresholds,
                                   unsigned m, const EntropyOptions& options = {});

struct BoundCheck {
  Rational max_probability;
  Rational bound;  // kappa / beta_min^m
  Rational slack;  // bound - max_probability
  bool holds = false;
};

// max_c P_m(c) <= kappa / beta_min^m, in exact arithmetic.
BoundCheck min_entropy_bound_check(const WordDistribution& dist, const Rational& beta_min,
                                   const Rational& kappa);

// H_inf(dist) >= k with k a nonnegative rational: max P^den <= 2^-num.
bool is_mk_source(const WordDistribution& dist, const Rational& k);
// H_inf(dist) >= m log2(beta_min) - log2(kappa).
bool is_mk_source(const WordDistribution& dist, const Rational& beta_min, const Rational& kappa);

}  // namespace betaenc
