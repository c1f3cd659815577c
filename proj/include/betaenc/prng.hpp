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

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

#include "betaenc/rational.hpp"

namespace betaenc {

// xoshiro256** keyed through splitmix64. Streams are derived by hashing
// (key, stream id), so the sequence for a given (seed, stream path) is fixed
// across platforms and independent of how work is scheduled.
class Prng {
 public:
  using result_type = std::uint64_t;
  static constexpr std::string_view kAlgorithm = "xoshiro256starstar-splitmix64/v1";

  explicit Prng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next(); }
  std::uint64_t next();

  Prng split(std::uint64_t stream) const { return Prng(key_, stream); }

  // Uniform on [0, bound).
  std::uint64_t below(std::uint64_t bound);
  double uniform01();
  mpz_class random_bits(unsigned long count);
  // Uniform random dyadic rational K / 2^bits, K in [0, 2^bits).
  Rational uniform_dyadic(unsigned long bits);
  // lo + (hi - lo) * K / 2^bits.
  Rational uniform_between(const Rational& lo, const Rational& hi, unsigned long bits = 32);

 private:
  std::uint64_t key_;
  std::array<std::uint64_t, 4> s_;
};

}  // namespace betaenc
