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

#include "betaenc/interval.hpp"

#include <charconv>

#include "betaenc/errors.hpp"

namespace betaenc {

Interval::Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) {
    throw DomainError("interval with lo > hi: [" + lo_.str() + ", " + hi_.str() + "]");
  }
}

Interval DyadicCell::interval() const {
  return Interval(Rational::dyadic(index, order), Rational::dyadic(index + 1, order));
}

bool DyadicCell::is_last() const {
  return index + 1 == (mpz_class(1) << order);
}

std::uint8_t DyadicCell::digit(unsigned j) const {
  if (j < 1 || j > order) throw DomainError("digit index out of range");
  return static_cast<std::uint8_t>(mpz_tstbit(index.get_mpz_t(), order - j));
}

DyadicCell dyadic_cell_of(const Rational& x, unsigned m) {
  if (m < 1) throw DomainError("dyadic cell order must be >= 1");
  if (x.sign() < 0 || Rational(1) < x) {
    throw DomainError("dyadic_cell: x = " + x.str() + " outside [0,1]");
  }
  DyadicCell cell;
  cell.order = m;
  const mpz_class cells = mpz_class(1) << m;
  cell.index = (x * Rational(cells)).floor();
  if (cell.index == cells) cell.index = cells - 1;
  return cell;
}

Interval dyadic_cell(const Rational& x, unsigned m) { return dyadic_cell_of(x, m).interval(); }

bool fits_in_cell(const Interval& interval, const DyadicCell& cell) {
  const Interval d = cell.interval();
  if (interval.lo() < d.lo()) return false;
  if (cell.is_last()) return interval.hi() <= d.hi();
  return interval.hi() < d.hi();
}

std::optional<DyadicCell> enclosing_cell(const Interval& interval, unsigned m) {
  if (interval.lo().sign() < 0 || Rational(1) < interval.lo()) return std::nullopt;
  DyadicCell cell = dyadic_cell_of(interval.lo(), m);
  if (!fits_in_cell(interval, cell)) return std::nullopt;
  return cell;
}

void require_beta(const Rational& beta) {
  if (beta <= Rational(1) || Rational(2) <= beta) {
    throw DomainError("beta = " + beta.str() + " outside (1,2)");
  }
}

Interval beta_cylinder(std::span<const std::uint8_t> bits, const Rational& beta) {
  require_beta(beta);
  const Rational inv = beta.inverse();
  Rational weight(1);
  Rational lo(0);
  for (std::uint8_t b : bits) {
    weight *= inv;
    if (b) lo += weight;
  }
  Rational hi = lo + weight / (beta - Rational(1));
  return Interval(std::move(lo), std::move(hi));
}

PrecisionPolicy PrecisionPolicy::float_fast(unsigned bits) {
  if (bits < 8 || bits > 53) {
    throw ConfigError("float_bits must lie in [8, 53], got " + std::to_string(bits));
  }
  return {PrecisionMode::FloatFast, bits};
}

PrecisionPolicy PrecisionPolicy::parse(std::string_view text) {
  if (text == "exact") return exact();
  constexpr std::string_view prefix = "float:";
  if (text.substr(0, prefix.size()) == prefix) {
    unsigned bits = 0;
    const auto rest = text.substr(prefix.size());
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), bits);
    if (ec == std::errc() && ptr == rest.data() + rest.size()) return float_fast(bits);
  }
  throw ParseError("precision must be 'exact' or 'float:<bits>', got '" +
                   std::string(text) + "'");
}

std::string PrecisionPolicy::str() const {
  return is_exact() ? "exact" : "float:" + std::to_string(float_bits);
}

}  // namespace betaenc
