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

#include "betaenc/encoder.hpp"

#include <cmath>

#include "betaenc/errors.hpp"

namespace betaenc {
namespace {

constexpr std::uint64_t kThresholdStream = 1;
constexpr std::uint64_t kBetaStream = 2;
constexpr std::uint64_t kSeededThresholdStream = 3;
constexpr std::uint64_t kSeededBetaStream = 4;

Rational admissible_threshold_max(const Rational& beta_ref) {
  return (beta_ref - Rational(1)).inverse();
}

void check_threshold(const Rational& u, const Rational& upper) {
  if (u < Rational(1) || upper < u) {
    throw ConfigError("threshold " + u.str() + " outside admissible range [1, " +
                      upper.str() + "]");
  }
}

std::string join(const std::vector<Rational>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ",";
    s += values[i].str();
  }
  return s;
}

double round_to_bits(double v, unsigned bits) {
  if (v == 0.0) return 0.0;
  int e = 0;
  const double f = std::frexp(v, &e);
  return std::ldexp(std::nearbyint(std::ldexp(f, static_cast<int>(bits))),
                    e - static_cast<int>(bits));
}

void require_unit_input(const Rational& x0) {
  if (x0.sign() < 0 || Rational(1) < x0) {
    throw DomainError("encoder input x0 = " + x0.str() + " outside [0,1]");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ThresholdProcess

ThresholdProcess ThresholdProcess::constant(Rational u) {
  ThresholdProcess p;
  p.kind_ = Kind::Constant;
  p.lo_ = u;
  p.hi_ = std::move(u);
  return p;
}

ThresholdProcess ThresholdProcess::explicit_sequence(std::vector<Rational> values) {
  if (values.empty()) throw ConfigError("explicit threshold sequence is empty");
  ThresholdProcess p;
  p.kind_ = Kind::ExplicitSequence;
  p.lo_ = values.front();
  p.hi_ = values.front();
  for (const auto& v : values) {
    p.lo_ = min(p.lo_, v);
    p.hi_ = max(p.hi_, v);
  }
  p.values_ = std::move(values);
  return p;
}

ThresholdProcess ThresholdProcess::iid_uniform(Rational lo, Rational hi) {
  if (hi < lo) throw ConfigError("threshold range with lo > hi");
  ThresholdProcess p;
  p.kind_ = Kind::IidUniform;
  p.lo_ = std::move(lo);
  p.hi_ = std::move(hi);
  return p;
}

ThresholdProcess ThresholdProcess::seeded(std::uint64_t seed, Rational lo, Rational hi) {
  ThresholdProcess p = iid_uniform(std::move(lo), std::move(hi));
  p.kind_ = Kind::Seeded;
  p.seed_ = seed;
  return p;
}

void ThresholdProcess::validate(const Rational& beta_ref) const {
  require_beta(beta_ref);
  const Rational upper = admissible_threshold_max(beta_ref);
  check_threshold(lo_, upper);
  check_threshold(hi_, upper);
}

std::string ThresholdProcess::describe() const {
  switch (kind_) {
    case Kind::Constant:
      return "constant(" + lo_.str() + ")";
    case Kind::ExplicitSequence:
      return "explicit(" + join(values_) + ")";
    case Kind::IidUniform:
      return "iid-uniform(" + lo_.str() + "," + hi_.str() + ")";
    case Kind::Seeded:
      return "seeded(" + std::to_string(seed_) + "," + lo_.str() + "," + hi_.str() + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// BetaProcess

BetaProcess BetaProcess::fixed(Rational beta) {
  require_beta(beta);
  BetaProcess p;
  p.kind_ = Kind::Fixed;
  p.values_ = {beta};
  p.probs_ = {Rational(1)};
  p.beta_min_ = beta;
  p.beta_max_ = std::move(beta);
  return p;
}

BetaProcess BetaProcess::explicit_sequence(std::vector<Rational> values) {
  if (values.empty()) throw ConfigError("explicit beta sequence is empty");
  Rational lo = values.front();
  Rational hi = values.front();
  for (const auto& v : values) {
    lo = min(lo, v);
    hi = max(hi, v);
  }
  return explicit_sequence(std::move(values), std::move(lo), std::move(hi));
}

BetaProcess BetaProcess::explicit_sequence(std::vector<Rational> values, Rational beta_min,
                                           Rational beta_max) {
  if (values.empty()) throw ConfigError("explicit beta sequence is empty");
  require_beta(beta_min);
  require_beta(beta_max);
  if (beta_max < beta_min) throw DomainError("beta_min > beta_max");
  for (const auto& v : values) {
    if (v < beta_min || beta_max < v) {
      throw DomainError("beta " + v.str() + " outside [" + beta_min.str() + ", " +
                        beta_max.str() + "]");
    }
  }
  BetaProcess p;
  p.kind_ = Kind::ExplicitSequence;
  p.values_ = std::move(values);
  p.beta_min_ = std::move(beta_min);
  p.beta_max_ = std::move(beta_max);
  return p;
}

BetaProcess BetaProcess::iid_finite_support(std::vector<Rational> values,
                                            std::vector<Rational> probabilities) {
  if (values.empty() || values.size() != probabilities.size()) {
    throw ConfigError("finite-support beta law needs equally many values and weights");
  }
  Rational total(0);
  for (const auto& w : probabilities) {
    if (w.sign() < 0) throw ConfigError("negative probability " + w.str());
    total += w;
  }
  if (total != Rational(1)) throw ConfigError("probabilities sum to " + total.str() + ", not 1");
  BetaProcess p;
  p.kind_ = Kind::IidFiniteSupport;
  p.beta_min_ = values.front();
  p.beta_max_ = values.front();
  for (const auto& v : values) {
    require_beta(v);
    p.beta_min_ = min(p.beta_min_, v);
    p.beta_max_ = max(p.beta_max_, v);
  }
  p.values_ = std::move(values);
  p.probs_ = std::move(probabilities);
  return p;
}

BetaProcess BetaProcess::seeded(std::uint64_t seed, Rational beta_min, Rational beta_max) {
  require_beta(beta_min);
  require_beta(beta_max);
  if (beta_max < beta_min) throw DomainError("beta_min > beta_max");
  BetaProcess p;
  p.kind_ = Kind::Seeded;
  p.seed_ = seed;
  p.beta_min_ = std::move(beta_min);
  p.beta_max_ = std::move(beta_max);
  return p;
}

Rational BetaProcess::kappa() const { return (beta_max_ - Rational(1)).inverse(); }

std::string BetaProcess::describe() const {
  switch (kind_) {
    case Kind::Fixed:
      return "fixed(" + values_.front().str() + ")";
    case Kind::ExplicitSequence:
      return "explicit(" + join(values_) + ")";
    case Kind::IidFiniteSupport:
      return "iid(" + join(values_) + ";" + join(probs_) + ")";
    case Kind::Seeded:
      return "seeded(" + std::to_string(seed_) + "," + beta_min_.str() + "," +
             beta_max_.str() + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Cursors

ThresholdCursor::ThresholdCursor(const ThresholdProcess& process, std::uint64_t run_seed)
    : process_(&process),
      rng_(process.kind() == ThresholdProcess::Kind::Seeded
               ? Prng(process.seed(), kSeededThresholdStream)
               : Prng(run_seed, kThresholdStream)) {}

Rational ThresholdCursor::next() {
  const std::size_t i = index_++;
  switch (process_->kind()) {
    case ThresholdProcess::Kind::Constant:
      return process_->lo();
    case ThresholdProcess::Kind::ExplicitSequence:
      if (i >= process_->values().size()) {
        throw ConfigError("explicit threshold sequence exhausted after " +
                          std::to_string(process_->values().size()) + " steps");
      }
      return process_->values()[i];
    case ThresholdProcess::Kind::IidUniform:
    case ThresholdProcess::Kind::Seeded:
      return rng_.uniform_between(process_->lo(), process_->hi());
  }
  return process_->lo();
}

BetaCursor::BetaCursor(const BetaProcess& process, std::uint64_t run_seed)
    : process_(&process),
      rng_(process.kind() == BetaProcess::Kind::Seeded ? Prng(process.seed(), kSeededBetaStream)
                                                       : Prng(run_seed, kBetaStream)) {}

Rational BetaCursor::next() {
  const std::size_t i = index_++;
  switch (process_->kind()) {
    case BetaProcess::Kind::Fixed:
      return process_->values().front();
    case BetaProcess::Kind::ExplicitSequence:
      if (i >= process_->values().size()) {
        throw ConfigError("explicit beta sequence exhausted after " +
                          std::to_string(process_->values().size()) + " steps");
      }
      return process_->values()[i];
    case BetaProcess::Kind::IidFiniteSupport: {
      // Inverse-CDF draw at 2^-64 resolution; exact comparison against the
      // cumulative weights.
      const Rational r = Rational::dyadic(mpz_class(static_cast<unsigned long>(rng_.next())), 64);
      Rational cumulative(0);
      const auto& probs = process_->probabilities();
      for (std::size_t j = 0; j < probs.size(); ++j) {
        cumulative += probs[j];
        if (r < cumulative) return process_->values()[j];
      }
      return process_->values().back();
    }
    case BetaProcess::Kind::Seeded:
      return rng_.uniform_between(process_->beta_min(), process_->beta_max());
  }
  return process_->values().front();
}

// ---------------------------------------------------------------------------
// Encoder

ExactStepper::ExactStepper(const Rational& x0) : num_(x0.numerator()), den_(x0.denominator()) {}

std::uint8_t ExactStepper::step(const Rational& beta, const Rational& u) {
  const mpq_class& b = beta.mpq();
  const mpq_class& uq = u.mpq();
  num_ *= b.get_num();
  den_ *= b.get_den();
  // beta*x = num/den >= s/t  <=>  num*t >= s*den
  scratch_ = den_ * uq.get_num();
  const bool one = uq.get_den() == 1 ? num_ >= scratch_ : num_ * uq.get_den() >= scratch_;
  if (one) num_ -= den_;
  return one ? 1 : 0;
}

std::string EncoderTrace::bit_string() const {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

EncoderTrace encode(const Rational& x0, const BetaProcess& betas,
                    const ThresholdProcess& thresholds, std::size_t n_steps,
                    const PrecisionPolicy& precision, std::uint64_t run_seed) {
  require_unit_input(x0);
  thresholds.validate(betas.beta_max());

  EncoderTrace trace;
  trace.x0 = x0;
  trace.precision = precision;
  trace.seed = run_seed;
  trace.states.reserve(n_steps);
  trace.bits.reserve(n_steps);
  trace.betas.reserve(n_steps);
  trace.thresholds.reserve(n_steps);

  BetaCursor beta_cursor(betas, run_seed);
  ThresholdCursor threshold_cursor(thresholds, run_seed);

  if (precision.is_exact()) {
    ExactStepper stepper(x0);
    for (std::size_t n = 0; n < n_steps; ++n) {
      Rational beta = beta_cursor.next();
      Rational u = threshold_cursor.next();
      trace.bits.push_back(stepper.step(beta, u));
      trace.states.push_back(stepper.state());
      trace.betas.push_back(std::move(beta));
      trace.thresholds.push_back(std::move(u));
    }
    return trace;
  }

  const unsigned bits = precision.float_bits;
  const double guard = std::ldexp(1.0, -static_cast<int>(bits / 2));
  double x = round_to_bits(x0.to_double(), bits);
  for (std::size_t n = 0; n < n_steps; ++n) {
    Rational beta = beta_cursor.next();
    Rational u = threshold_cursor.next();
    const double bd = round_to_bits(beta.to_double(), bits);
    const double ud = round_to_bits(u.to_double(), bits);
    const double y = round_to_bits(bd * x, bits);
    if (std::fabs(y - ud) < guard) trace.guard_violations.push_back(n + 1);
    const std::uint8_t b = y >= ud ? 1 : 0;
    x = round_to_bits(y - b, bits);
    trace.bits.push_back(b);
    trace.states.push_back(Rational::from_double(x));
    trace.betas.push_back(std::move(beta));
    trace.thresholds.push_back(std::move(u));
  }
  return trace;
}

std::vector<std::uint8_t> encode_bits(const Rational& x0, const BetaProcess& betas,
                                      const ThresholdProcess& thresholds, std::size_t n_steps,
                                      std::uint64_t run_seed) {
  require_unit_input(x0);
  thresholds.validate(betas.beta_max());
  BetaCursor beta_cursor(betas, run_seed);
  ThresholdCursor threshold_cursor(thresholds, run_seed);
  ExactStepper stepper(x0);
  std::vector<std::uint8_t> bits;
  bits.reserve(n_steps);
  for (std::size_t n = 0; n < n_steps; ++n) {
    const Rational beta = beta_cursor.next();
    bits.push_back(stepper.step(beta, threshold_cursor.next()));
  }
  return bits;
}

std::pair<std::uint8_t, Rational> apply_tu(const Rational& y, const Rational& beta,
                                           const Rational& u) {
  require_beta(beta);
  const Rational upper = admissible_threshold_max(beta);
  if (y.sign() < 0 || upper < y) {
    throw DomainError("T_u argument " + y.str() + " outside [0, " + upper.str() + "]");
  }
  if (u < Rational(1) || upper < u) {
    throw DomainError("threshold " + u.str() + " outside [1, " + upper.str() + "]");
  }
  const Rational by = beta * y;
  if (by < u) return {0, by};
  return {1, by - Rational(1)};
}

Rational reconstruct_partial(const EncoderTrace& trace, std::size_t n) {
  if (!trace.precision.is_exact()) {
    throw ConfigError("reconstruct_partial requires an exact trace");
  }
  if (n > trace.size()) {
    throw DomainError("reconstruct_partial: n = " + std::to_string(n) + " exceeds trace length " +
                      std::to_string(trace.size()));
  }
  Rational sum(0);
  Rational weight(1);
  for (std::size_t i = 0; i < n; ++i) {
    weight /= trace.betas[i];
    if (trace.bits[i]) sum += weight;
  }
  return sum;
}

Rational reconstruction_error_bound(const Rational& beta_min, const Rational& beta_max,
                                    std::size_t n) {
  return (beta_max - Rational(1)).inverse() / beta_min.pow(static_cast<long>(n));
}

unsigned long generic_input_bits(const Rational& beta_max, std::size_t steps) {
  const double per_step = std::log2(beta_max.to_double());
  return static_cast<unsigned long>(std::ceil(static_cast<double>(steps) * per_step)) + 64;
}

std::vector<std::uint8_t> generate_stream(const BetaProcess& betas,
                                          const ThresholdProcess& thresholds,
                                          std::size_t total_bits, std::size_t segment_bits,
                                          std::uint64_t seed) {
  if (segment_bits == 0) throw ConfigError("segment length must be positive");
  thresholds.validate(betas.beta_max());
  const unsigned long input_bits = generic_input_bits(betas.beta_max(), segment_bits);
  const Prng root(seed);
  std::vector<std::uint8_t> out;
  out.reserve(total_bits);
  for (std::uint64_t segment = 0; out.size() < total_bits; ++segment) {
    Prng rng = root.split(segment);
    const Rational x0 = rng.uniform_dyadic(input_bits);
    const std::uint64_t run_seed = rng.next();
    BetaCursor beta_cursor(betas, run_seed);
    ThresholdCursor threshold_cursor(thresholds, run_seed);
    ExactStepper stepper(x0);
    const std::size_t steps = std::min(segment_bits, total_bits - out.size());
    for (std::size_t n = 0; n < steps; ++n) {
      const Rational beta = beta_cursor.next();
      out.push_back(stepper.step(beta, threshold_cursor.next()));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Preimages

std::pair<std::optional<PreimageNode>, std::optional<PreimageNode>> PreimageNode::split(
    const Rational& beta, const Rational& u) const {
  // beta * (slope*x - offset) < u  <=>  x < (u/beta + offset) / slope
  const Rational cut = (u / beta + offset) / slope;
  std::pair<std::optional<PreimageNode>, std::optional<PreimageNode>> parts;
  const Rational& zero_hi = min(cut, hi);
  if (lo < zero_hi) {
    parts.first = PreimageNode{lo, zero_hi, slope * beta, offset * beta};
  }
  const Rational& one_lo = max(cut, lo);
  if (one_lo < hi) {
    parts.second = PreimageNode{one_lo, hi, slope * beta, offset * beta + Rational(1)};
  }
  return parts;
}

std::vector<WordPreimage> word_preimages(const std::vector<Rational>& betas,
                                         const std::vector<Rational>& thresholds,
                                         std::size_t node_budget) {
  if (betas.size() != thresholds.size()) {
    throw ConfigError("word_preimages: beta and threshold sequences differ in length");
  }
  std::vector<WordPreimage> level{WordPreimage{{}, PreimageNode{}}};
  std::size_t visited = 1;
  for (std::size_t n = 0; n < betas.size(); ++n) {
    std::vector<WordPreimage> next;
    next.reserve(level.size() * 2);
    for (auto& entry : level) {
      auto [zero, one] = entry.node.split(betas[n], thresholds[n]);
      if (zero) {
        next.push_back(WordPreimage{entry.word, std::move(*zero)});
        next.back().word.push_back(0);
      }
      if (one) {
        next.push_back(WordPreimage{std::move(entry.word), std::move(*one)});
        next.back().word.push_back(1);
      }
    }
    visited += next.size();
    if (visited > node_budget) {
      throw ResourceError("preimage enumeration exceeds budget of " +
                          std::to_string(node_budget) + " nodes");
    }
    level = std::move(next);
  }
  return level;
}

}  // namespace betaenc
