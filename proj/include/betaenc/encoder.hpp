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
#include <string>
#include <utility>
#include <vector>

#include "betaenc/interval.hpp"
#include "betaenc/prng.hpp"
#include "betaenc/rational.hpp"

namespace betaenc {

// Quantizer thresholds u_1, u_2, ... of the encoder loop.
//
//  Constant          u_n = u for every n.
//  ExplicitSequence  u_n taken from a finite list; running past its end is a
//                    configuration error.
//  IidUniform        u_n drawn afresh for every run from the run's own random
//                    stream, uniform on [lo, hi] at 2^-32 resolution.
//  Seeded            same law, but drawn from a stream keyed only by the
//                    process seed, so every run sees the same realization.
class ThresholdProcess {
 public:
  enum class Kind { Constant, ExplicitSequence, IidUniform, Seeded };

  static ThresholdProcess constant(Rational u);
  static ThresholdProcess explicit_sequence(std::vector<Rational> values);
  static ThresholdProcess iid_uniform(Rational lo, Rational hi);
  static ThresholdProcess seeded(std::uint64_t seed, Rational lo, Rational hi);

  Kind kind() const { return kind_; }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  std::uint64_t seed() const { return seed_; }

  // Every u_n must satisfy 1 <= u_n <= (beta_ref - 1)^-1; throws ConfigError.
  void validate(const Rational& beta_ref) const;
  std::string describe() const;

 private:
  ThresholdProcess() = default;

  Kind kind_ = Kind::Constant;
  std::vector<Rational> values_;
  Rational lo_;
  Rational hi_;
  std::uint64_t seed_ = 0;
};

// Amplification factors beta_1, beta_2, ... with 1 < beta_min <= beta_n <=
// beta_max < 2.
//
//  Fixed             beta_n = beta.
//  ExplicitSequence  finite list; the range defaults to its min and max.
//  IidFiniteSupport  i.i.d. draws from a finite law with exact weights.
//  Seeded            uniform on [beta_min, beta_max] at 2^-32 resolution from a
//                    stream keyed by the process seed (Monte-Carlo only).
class BetaProcess {
 public:
  enum class Kind { Fixed, ExplicitSequence, IidFiniteSupport, Seeded };

  static BetaProcess fixed(Rational beta);
  static BetaProcess explicit_sequence(std::vector<Rational> values);
  static BetaProcess explicit_sequence(std::vector<Rational> values, Rational beta_min,
                                       Rational beta_max);
  static BetaProcess iid_finite_support(std::vector<Rational> values,
                                        std::vector<Rational> probabilities);
  static BetaProcess seeded(std::uint64_t seed, Rational beta_min, Rational beta_max);

  Kind kind() const { return kind_; }
  const std::vector<Rational>& values() const { return values_; }
  const std::vector<Rational>& probabilities() const { return probs_; }
  std::uint64_t seed() const { return seed_; }
  const Rational& beta_min() const { return beta_min_; }
  const Rational& beta_max() const { return beta_max_; }
  // (beta_max - 1)^-1, the uniform bound on encoder states.
  Rational kappa() const;
  bool is_finite_support() const { return kind_ != Kind::Seeded; }
  std::string describe() const;

 private:
  BetaProcess() = default;

  Kind kind_ = Kind::Fixed;
  std::vector<Rational> values_;
  std::vector<Rational> probs_;
  std::uint64_t seed_ = 0;
  Rational beta_min_;
  Rational beta_max_;
};

// Realizes a ThresholdProcess one value at a time.
class ThresholdCursor {
 public:
  ThresholdCursor(const ThresholdProcess& process, std::uint64_t run_seed);
  Rational next();

 private:
  const ThresholdProcess* process_;
  Prng rng_;
  std::size_t index_ = 0;
};

class BetaCursor {
 public:
  BetaCursor(const BetaProcess& process, std::uint64_t run_seed);
  Rational next();

 private:
  const BetaProcess* process_;
  Prng rng_;
  std::size_t index_ = 0;
};

// Exact encoder state x_n = num / den kept without normalization; each step
// costs a couple of multiplications instead of a gcd.
class ExactStepper {
 public:
  explicit ExactStepper(const Rational& x0);

  // b_n = 1 iff beta * x_{n-1} >= u; then x_n = beta * x_{n-1} - b_n.
  std::uint8_t step(const Rational& beta, const Rational& u);
  Rational state() const { return Rational(num_, den_); }

 private:
  mpz_class num_;
  mpz_class den_;
  mpz_class scratch_;
};

struct EncoderTrace {
  Rational x0;
  std::vector<Rational> states;  // x_1..x_n
  std::vector<std::uint8_t> bits;
  std::vector<Rational> betas;
  std::vector<Rational> thresholds;
  PrecisionPolicy precision;
  std::string prng = std::string(Prng::kAlgorithm);
  std::uint64_t seed = 0;
  // FloatFast only: 1-based steps where |beta x - u| < 2^(-float_bits/2).
  std::vector<std::size_t> guard_violations;

  std::size_t size() const { return bits.size(); }
  std::string bit_string() const;
};

// Runs the encoder loop for n_steps from x0. In Exact mode every recorded
// state is exact; in FloatFast mode arithmetic is rounded to
// precision.float_bits mantissa bits and near-ties are recorded as guard
// violations.
EncoderTrace encode(const Rational& x0, const BetaProcess& betas,
                    const ThresholdProcess& thresholds, std::size_t n_steps,
                    const PrecisionPolicy& precision = PrecisionPolicy::exact(),
                    std::uint64_t run_seed = 0);

// Bits only, exact arithmetic, no per-step state materialization.
std::vector<std::uint8_t> encode_bits(const Rational& x0, const BetaProcess& betas,
                                      const ThresholdProcess& thresholds, std::size_t n_steps,
                                      std::uint64_t run_seed = 0);

// One application of T_u. Requires 0 <= y <= (beta-1)^-1 and
// 1 <= u <= (beta-1)^-1.
std::pair<std::uint8_t, Rational> apply_tu(const Rational& y, const Rational& beta,
                                           const Rational& u);

// sum_{i<=n} b_i / prod_{j<=i} beta_j. Exact traces only.
Rational reconstruct_partial(const EncoderTrace& trace, std::size_t n);

// kappa / beta_min^n, the bound on x0 - reconstruct_partial(trace, n).
Rational reconstruction_error_bound(const Rational& beta_min, const Rational& beta_max,
                                    std::size_t n);

// Long bit stream made of independent encoder runs of segment_bits steps, each
// started from a fresh uniform dyadic input with enough bits to behave like a
// real number over the whole segment.
std::vector<std::uint8_t> generate_stream(const BetaProcess& betas,
                                          const ThresholdProcess& thresholds,
                                          std::size_t total_bits, std::size_t segment_bits,
                                          std::uint64_t seed);

// Input bits needed for a dyadic x0 to be indistinguishable from a real
// number during `steps` encoder steps: ceil(steps * log2(beta_max)) + 64.
unsigned long generic_input_bits(const Rational& beta_max, std::size_t steps);

// Set of inputs x in [0,1) that produce a given bit prefix, together with the
// affine map x -> slope * x - offset giving the encoder state on that set.
// Each branch of T_u is increasing and affine, so the set stays an interval.
struct PreimageNode {
  Rational lo{0};
  Rational hi{1};
  Rational slope{1};
  Rational offset{0};

  Rational measure() const { return hi - lo; }
  // Preimages of the next bit being 0 and 1 (nullopt when empty).
  std::pair<std::optional<PreimageNode>, std::optional<PreimageNode>> split(
      const Rational& beta, const Rational& u) const;
};

struct WordPreimage {
  std::vector<std::uint8_t> word;
  PreimageNode node;
};

// All words of length `depth` attainable from [0,1) under the given
// per-step factors and thresholds, with their input sets. Throws
// ResourceError once more than node_budget tree nodes would be visited.
std::vector<WordPreimage> word_preimages(const std::vector<Rational>& betas,
                                         const std::vector<Rational>& thresholds,
                                         std::size_t node_budget = std::size_t{1} << 24);

}  // namespace betaenc
