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
#include <optional>
#include <span>
#include <vector>

#include "betaenc/encoder.hpp"
#include "betaenc/interval.hpp"
#include "betaenc/rational.hpp"

namespace betaenc {

// Streaming conversion of fixed-beta encoder bits into binary digits of the
// input. A binary digit a_j is emitted as soon as the current cylinder lies
// inside a single dyadic cell of order j; emitted digits are never retracted.
struct ConversionState {
  Rational beta;
  Interval cylinder;                  // I_(b_1..b_k)
  Rational weight{1};                 // beta^-k
  std::vector<std::uint8_t> emitted;  // a_1..a_j
  std::size_t k = 0;

  static ConversionState fresh(const Rational& beta);
  std::size_t m_confirmed() const { return emitted.size(); }
};

struct PushResult {
  ConversionState state;
  std::vector<std::uint8_t> digits;  // newly emitted, in order
};

PushResult push_bit(const ConversionState& state, std::uint8_t bit, const Rational& beta);

// Same emission rule as push_bit for a fixed beta = p/q, in scaled integer
// arithmetic. Used by the Monte-Carlo drivers.
class DigitTracker {
 public:
  explicit DigitTracker(const Rational& beta);

  // Returns the number of digits newly confirmed by this bit.
  std::size_t push(std::uint8_t bit);
  std::size_t k() const { return k_; }
  std::size_t confirmed() const { return digits_.size(); }
  const std::vector<std::uint8_t>& digits() const { return digits_; }

 private:
  bool try_confirm();

  mpz_class p_;
  mpz_class q_;
  mpz_class p_minus_q_;
  mpz_class a_;       // lo = a / p^k
  mpz_class p_pow_;   // p^k
  mpz_class q_pow_;   // q^k
  mpz_class lo_num_;  // a (p - q)
  mpz_class hi_num_;  // a (p - q) + q^(k+1)
  mpz_class den_;     // p^k (p - q)
  mpz_class scratch_;
  mpz_class cell_;
  std::size_t k_ = 0;
  std::vector<std::uint8_t> digits_;
};

struct KValue {
  std::size_t k = 0;
  bool exceeded = false;  // no k <= cap worked; k is then the cap
};

// ceil(4 m log2 / log beta) + 64.
std::size_t default_k_cap(unsigned m, const Rational& beta);

// k(m,u,x): least k with I_k(u,x) inside D_m(x).
KValue k_of_m(const Rational& x, unsigned m, const Rational& beta,
              const ThresholdProcess& thresholds, std::optional<std::size_t> cap = std::nullopt,
              std::uint64_t run_seed = 0);

// k(m,u,x) for every m in m_values (ascending) from a single encoder run.
std::vector<KValue> k_of_m_all(const Rational& x, std::span<const unsigned> m_values,
                               const Rational& beta, const ThresholdProcess& thresholds,
                               std::uint64_t run_seed = 0);

// [sum b_k beta_max^-k, sum b_k beta_min^-k + kappa beta_min^-m]: the
// inputs compatible with the bits when only the range of beta is known.
Interval uncertainty_interval(std::span<const std::uint8_t> bits, const Rational& beta_min,
                              const Rational& beta_max);

// First m binary digits of x in [0,1] by the doubling map; dyadic inputs use
// the expansion ending in zeros.
std::vector<std::uint8_t> binary_digits(const Rational& x, unsigned m);

// m log 2 / log beta < k  <=>  beta^k > 2^m, decided exactly.
bool exceeds_binary_rate(std::size_t k, unsigned m, const Rational& beta);

}  // namespace betaenc
