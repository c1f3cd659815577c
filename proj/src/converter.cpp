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

#include "betaenc/converter.hpp"

#include <algorithm>
#include <cmath>

#include "betaenc/errors.hpp"

namespace betaenc {

ConversionState ConversionState::fresh(const Rational& beta) {
  require_beta(beta);
  return ConversionState{beta, Interval(Rational(0), (beta - Rational(1)).inverse()), Rational(1), {}, 0};
}

PushResult push_bit(const ConversionState& state, std::uint8_t bit, const Rational& beta) {
  require_beta(beta);
  if (state.beta != beta) {
    throw ConfigError("push_bit: beta " + beta.str() + " differs from the state's beta " +
                      state.beta.str());
  }
  PushResult result{state, {}};
  ConversionState& next = result.state;
  next.weight /= beta;
  Rational lo = state.cylinder.lo();
  if (bit) lo += next.weight;
  Rational hi = lo + next.weight / (beta - Rational(1));
  next.cylinder = Interval(std::move(lo), std::move(hi));
  ++next.k;
  while (true) {
    const unsigned order = static_cast<unsigned>(next.emitted.size() + 1);
    const auto cell = enclosing_cell(next.cylinder, order);
    if (!cell) break;
    const std::uint8_t digit = cell->digit(order);
    next.emitted.push_back(digit);
    result.digits.push_back(digit);
  }
  return result;
}

DigitTracker::DigitTracker(const Rational& beta)
    : p_(beta.numerator()), q_(beta.denominator()), a_(0), p_pow_(1), q_pow_(1) {
  require_beta(beta);
  p_minus_q_ = p_ - q_;
}

std::size_t DigitTracker::push(std::uint8_t bit) {
  ++k_;
  q_pow_ *= q_;
  p_pow_ *= p_;
  a_ *= p_;
  if (bit) a_ += q_pow_;
  lo_num_ = a_ * p_minus_q_;
  hi_num_ = lo_num_ + q_pow_ * q_;
  den_ = p_pow_ * p_minus_q_;
  const std::size_t before = digits_.size();
  while (try_confirm()) {
  }
  return digits_.size() - before;
}

bool DigitTracker::try_confirm() {
  if (lo_num_ > den_) return false;
  const auto order = static_cast<unsigned long>(digits_.size() + 1);
  mpz_mul_2exp(scratch_.get_mpz_t(), lo_num_.get_mpz_t(), order);
  mpz_fdiv_q(cell_.get_mpz_t(), scratch_.get_mpz_t(), den_.get_mpz_t());
  mpz_class last;
  mpz_setbit(last.get_mpz_t(), order);
  last -= 1;
  bool fits = false;
  if (cell_ >= last) {
    cell_ = last;
    fits = hi_num_ <= den_;
  } else {
    mpz_mul_2exp(scratch_.get_mpz_t(), hi_num_.get_mpz_t(), order);
    fits = scratch_ < (cell_ + 1) * den_;
  }
  if (fits) digits_.push_back(static_cast<std::uint8_t>(mpz_tstbit(cell_.get_mpz_t(), 0)));
  return fits;
}

std::size_t default_k_cap(unsigned m, const Rational& beta) {
  require_beta(beta);
  const double rate = std::log(2.0) / std::log(beta.to_double());
  return static_cast<std::size_t>(std::ceil(4.0 * m * rate)) + 64;
}

std::vector<KValue> k_of_m_all(const Rational& x, std::span<const unsigned> m_values,
                               const Rational& beta, const ThresholdProcess& thresholds,
                               std::uint64_t run_seed) {
  if (x.sign() < 0 || Rational(1) < x) throw DomainError("x = " + x.str() + " outside [0,1]");
  if (!std::is_sorted(m_values.begin(), m_values.end()) ||
      (!m_values.empty() && m_values.front() < 1)) {
    throw ConfigError("m values must be positive and ascending");
  }
  thresholds.validate(beta);
  ThresholdCursor cursor(thresholds, run_seed);
  ExactStepper stepper(x);
  DigitTracker tracker(beta);
  std::vector<KValue> out(m_values.size());
  std::size_t idx = 0;
  while (idx < m_values.size()) {
    const unsigned m = m_values[idx];
    if (tracker.confirmed() >= m) {
      out[idx++] = KValue{tracker.k(), false};
      continue;
    }
    const std::size_t cap = default_k_cap(m, beta);
    if (tracker.k() >= cap) {
      out[idx++] = KValue{cap, true};
      continue;
    }
    tracker.push(stepper.step(beta, cursor.next()));
  }
  return out;
}

KValue k_of_m(const Rational& x, unsigned m, const Rational& beta,
              const ThresholdProcess& thresholds, std::optional<std::size_t> cap,
              std::uint64_t run_seed) {
  if (m < 1) throw DomainError("m must be >= 1");
  if (x.sign() < 0 || Rational(1) < x) throw DomainError("x = " + x.str() + " outside [0,1]");
  thresholds.validate(beta);
  const std::size_t limit = cap.value_or(default_k_cap(m, beta));
  ThresholdCursor cursor(thresholds, run_seed);
  ExactStepper stepper(x);
  DigitTracker tracker(beta);
  while (tracker.k() < limit) {
    tracker.push(stepper.step(beta, cursor.next()));
    if (tracker.confirmed() >= m) return KValue{tracker.k(), false};
  }
  return KValue{limit, true};
}

Interval uncertainty_interval(std::span<const std::uint8_t> bits, const Rational& beta_min,
                              const Rational& beta_max) {
  require_beta(beta_min);
  require_beta(beta_max);
  if (beta_max < beta_min) throw DomainError("beta_min > beta_max");
  const Rational kappa = (beta_max - Rational(1)).inverse();
  const Rational inv_min = beta_min.inverse();
  const Rational inv_max = beta_max.inverse();
  Rational w_min(1), w_max(1), lo(0), hi(0);
  for (std::uint8_t b : bits) {
    w_min *= inv_min;
    w_max *= inv_max;
    if (b) {
      lo += w_max;
      hi += w_min;
    }
  }
  hi += kappa * w_min;
  return Interval(std::move(lo), std::move(hi));
}

std::vector<std::uint8_t> binary_digits(const Rational& x, unsigned m) {
  if (x.sign() < 0 || Rational(1) < x) throw DomainError("x = " + x.str() + " outside [0,1]");
  std::vector<std::uint8_t> digits;
  digits.reserve(m);
  Rational y = x;
  for (unsigned i = 0; i < m; ++i) {
    y *= Rational(2);
    const bool one = Rational(1) <= y;
    if (one) y -= Rational(1);
    digits.push_back(one ? 1 : 0);
  }
  return digits;
}

bool exceeds_binary_rate(std::size_t k, unsigned m, const Rational& beta) {
  mpz_class lhs, rhs;
  mpz_pow_ui(lhs.get_mpz_t(), beta.mpq().get_num_mpz_t(), k);
  mpz_pow_ui(rhs.get_mpz_t(), beta.mpq().get_den_mpz_t(), k);
  rhs <<= m;
  return lhs > rhs;
}

}  // namespace betaenc
