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

#include <gtest/gtest.h>

#include <cmath>

#include "betaenc/entropy.hpp"
#include "betaenc/errors.hpp"
#include "oracles.hpp"

using namespace betaenc;

namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

const auto kU1 = ThresholdProcess::constant(Rational(1));

std::uint64_t pack(const std::vector<std::uint8_t>& bits) {
  std::uint64_t w = 0;
  for (auto b : bits) w = (w << 1) | b;
  return w;
}

}  // namespace

TEST(WordDistribution, SingleBit) {
  for (const auto& beta : {R(3, 2), R(8, 5), R(9, 5)}) {
    const auto d = word_distribution(BetaProcess::fixed(beta), kU1, 1);
    EXPECT_EQ(d.probability(0), beta.inverse());
    EXPECT_EQ(d.probability(1), R(1) - beta.inverse());
  }
  const auto d = word_distribution(BetaProcess::fixed(R(8, 5)), kU1, 1);
  EXPECT_EQ(d.max_probability(), R(5, 8));
  EXPECT_NEAR(d.min_entropy(), 0.678071905, 1e-9);
  EXPECT_EQ(d.min_entropy_decimal(50), "0.67807190511263765212968057051060982413516860697542");
}

TEST(WordDistribution, BoundAtThree) {
  const auto d = word_distribution(BetaProcess::fixed(R(3, 2)), kU1, 3);
  const auto check = min_entropy_bound_check(d, R(3, 2), R(2));
  EXPECT_EQ(check.bound, R(16, 27));
  EXPECT_EQ(d.max_probability(), R(8, 27));
  EXPECT_TRUE(check.holds);
  EXPECT_EQ(check.slack, R(8, 27));
  EXPECT_EQ(d.min_entropy_decimal(50), "1.75488750216346854436121683184344952627944322307744");
}

TEST(WordDistribution, MatchesLinearConstraintOracle) {
  for (const auto& beta : {R(3, 2), R(8, 5), R(9, 5), R(21, 20)}) {
    for (unsigned m = 1; m <= 8; ++m) {
      const auto d = word_distribution(BetaProcess::fixed(beta), kU1, m);
      const auto ref = oracle::word_probabilities(m, {beta.mpq()}, {oracle::Q(1)});
      for (std::uint64_t w = 0; w < ref.size(); ++w) EXPECT_EQ(d.probability(w).mpq(), ref[w]);
      EXPECT_EQ(d.total(), R(1));
    }
  }
}

TEST(WordDistribution, MatchesMidpointGridOracle) {
  // 2^12 cells, each counted by the word of its midpoint; each word's
  // preimage is one interval, so at most two cells per word are misassigned
  const long cells = 1L << 12;
  for (const auto& beta : {R(3, 2), R(9, 5)}) {
    for (unsigned m = 1; m <= 6; ++m) {
      const auto d = word_distribution(BetaProcess::fixed(beta), kU1, m);
      std::vector<long> counts(std::size_t{1} << m, 0);
      for (long c = 0; c < cells; ++c) {
        const oracle::Q mid(2 * c + 1, 2 * cells);
        ++counts[pack(oracle::encode_fixed(mid, beta.mpq(), 1, m).bits)];
      }
      const Rational tolerance = R(2 * m) * pow2(-12);
      for (std::uint64_t w = 0; w < counts.size(); ++w) {
        EXPECT_LE((d.probability(w) - R(counts[w], cells)).abs(), tolerance);
      }
    }
  }
}

TEST(WordDistribution, RefinementIdentity) {
  const auto iid = BetaProcess::iid_finite_support({R(3, 2), R(8, 5)}, {R(1, 2), R(1, 2)});
  for (const auto& betas : {BetaProcess::fixed(R(3, 2)), BetaProcess::fixed(R(9, 5)), iid}) {
    for (unsigned m = 1; m < 7; ++m) {
      const auto coarse = word_distribution(betas, kU1, m);
      const auto fine = word_distribution(betas, kU1, m + 1);
      const auto folded = fine.marginal();
      for (std::uint64_t w = 0; w < (std::uint64_t{1} << m); ++w) {
        EXPECT_EQ(fine.probability(2 * w) + fine.probability(2 * w + 1), coarse.probability(w));
        EXPECT_EQ(folded.probability(w), coarse.probability(w));
      }
    }
  }
}

TEST(WordDistribution, MixtureByHand) {
  // x produces 00 under (b1, b2) iff x < 1/(b1 b2); averaging over the four
  // sequences gives (1/4)(4/9 + 2 * 5/12 + 25/64) = 961/2304
  const auto iid = BetaProcess::iid_finite_support({R(3, 2), R(8, 5)}, {R(1, 2), R(1, 2)});
  const auto d = word_distribution(iid, kU1, 2);
  EXPECT_EQ(d.probability(0), R(961, 2304));
  const auto ref = oracle::word_probabilities(2, {oracle::q(3, 2), oracle::q(8, 5)}, {oracle::q(1, 2), oracle::q(1, 2)});
  for (std::uint64_t w = 0; w < 4; ++w) EXPECT_EQ(d.probability(w).mpq(), ref[w]);
  // the mixture lies strictly between the pure cases for the word 00
  const auto lo = word_distribution(BetaProcess::fixed(R(8, 5)), kU1, 2).probability(0);
  const auto hi = word_distribution(BetaProcess::fixed(R(3, 2)), kU1, 2).probability(0);
  EXPECT_LT(lo, d.probability(0));
  EXPECT_LT(d.probability(0), hi);
}

TEST(WordDistribution, IidMatchesOracle) {
  const std::vector<oracle::Q> support{oracle::q(3, 2), oracle::q(9, 5)};
  const std::vector<oracle::Q> weights{oracle::q(1, 3), oracle::q(2, 3)};
  const auto iid = BetaProcess::iid_finite_support({R(3, 2), R(9, 5)}, {R(1, 3), R(2, 3)});
  for (unsigned m = 1; m <= 6; ++m) {
    const auto d = word_distribution(iid, kU1, m);
    const auto ref = oracle::word_probabilities(m, support, weights);
    for (std::uint64_t w = 0; w < ref.size(); ++w) EXPECT_EQ(d.probability(w).mpq(), ref[w]);
    const auto check = min_entropy_bound_check(d, iid.beta_min(), iid.kappa());
    EXPECT_TRUE(check.holds);
    EXPECT_GE(check.slack, R(0));
  }
}

TEST(WordDistribution, GeneralThresholdsBehindFlag) {
  const auto beta = BetaProcess::fixed(R(3, 2));
  const auto u = ThresholdProcess::constant(R(3, 2));
  EXPECT_THROW(word_distribution(beta, u, 3), ConfigError);
  EntropyOptions options;
  options.allow_general_thresholds = true;
  const auto d = word_distribution(beta, u, 5, options);
  const auto ref = oracle::word_probabilities(5, {oracle::q(3, 2)}, {oracle::Q(1)}, oracle::q(3, 2));
  for (std::uint64_t w = 0; w < ref.size(); ++w) EXPECT_EQ(d.probability(w).mpq(), ref[w]);
  EXPECT_THROW(word_distribution(beta, ThresholdProcess::iid_uniform(R(1), R(2)), 3, options), ConfigError);
}

TEST(WordDistribution, Errors) {
  EXPECT_THROW(word_distribution(BetaProcess::seeded(1, R(3, 2), R(9, 5)), kU1, 3), ConfigError);
  EXPECT_THROW(word_distribution(BetaProcess::fixed(R(3, 2)), kU1, 30), ResourceError);
  EXPECT_THROW(word_distribution(BetaProcess::fixed(R(3, 2)), kU1, 0), DomainError);
}

TEST(MkSource, Examples) {
  std::map<std::uint64_t, Rational> uniform;
  for (std::uint64_t w = 0; w < 16; ++w) uniform.emplace(w, R(1, 16));
  const WordDistribution u4(4, uniform);
  EXPECT_TRUE(is_mk_source(u4, R(4)));
  EXPECT_FALSE(is_mk_source(u4, R(41, 10)));
  const WordDistribution point(4, {{5, R(1)}});
  EXPECT_FALSE(is_mk_source(point, R(1, 1000)));
  for (const auto& beta : {R(3, 2), R(8, 5), R(9, 5)}) {
    for (unsigned m = 1; m <= 8; ++m) {
      const auto d = word_distribution(BetaProcess::fixed(beta), kU1, m);
      EXPECT_TRUE(is_mk_source(d, beta, (beta - R(1)).inverse()));
    }
  }
}
