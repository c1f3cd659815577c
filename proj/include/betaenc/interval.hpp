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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "betaenc/rational.hpp"

namespace betaenc {

// Closed interval [lo, hi] with exact endpoints.
class Interval {
 public:
  Interval(Rational lo, Rational hi);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational length() const { return hi_ - lo_; }

  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  // Closed-set inclusion.
  bool subset_of(const Interval& other) const {
    return other.lo_ <= lo_ && hi_ <= other.hi_;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  Rational lo_;
  Rational hi_;
};

// Element of the order-m dyadic partition of [0,1]: [index/2^m,
// (index+1)/2^m), with the point 1 added to the last cell.
struct DyadicCell {
  unsigned order = 0;
  mpz_class index;

  Interval interval() const;
  bool is_last() const;
  // Binary address d_1..d_order of the cell (= first binary digits of its
  // points).
  std::uint8_t digit(unsigned j) const;  // 1-based
};

// D_m(x). Throws DomainError unless 0 <= x <= 1 and m >= 1.
DyadicCell dyadic_cell_of(const Rational& x, unsigned m);
Interval dyadic_cell(const Rational& x, unsigned m);

// Containment of a closed interval in a dyadic cell using the half-open
// cell semantics: D.lo <= I.lo and I.hi < D.hi, except that the last cell
// of each order accepts I.hi <= 1.
bool fits_in_cell(const Interval& interval, const DyadicCell& cell);

// The order-m cell that contains the whole interval, if any.
std::optional<DyadicCell> enclosing_cell(const Interval& interval, unsigned m);

// Throws DomainError unless 1 < beta < 2.
void require_beta(const Rational& beta);

// [sum b_n beta^-n, sum b_n beta^-n + beta^-k (beta-1)^-1]. The empty word
// gives [0, (beta-1)^-1].
Interval beta_cylinder(std::span<const std::uint8_t> bits, const Rational& beta);

enum class PrecisionMode { Exact, FloatFast };

struct PrecisionPolicy {
  PrecisionMode mode = PrecisionMode::Exact;
  unsigned float_bits = 53;  // mantissa bits, FloatFast only

  static PrecisionPolicy exact() { return {}; }
  static PrecisionPolicy float_fast(unsigned bits);
  // "exact" or "float:<bits>".
  static PrecisionPolicy parse(std::string_view text);
  std::string str() const;

  bool is_exact() const { return mode == PrecisionMode::Exact; }
};

}  // namespace betaenc
