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

#include "betaenc/converter.hpp"
#include "betaenc/errors.hpp"
#include "oracles.hpp"

using namespace betaenc;

namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

ConversionState feed(const Rational& beta, const std::vector<std::uint8_t>& bits) {
  auto state = ConversionState::fresh(beta);
  for (auto b : bits) state = push_bit(state, b, beta).state;
  return state;
}

// Non-dyadic rationals in (0,1).
std::vector<Rational> rational_grid() {
  std::vector<Rational> out;
  for (long q : {3L, 5L, 7L, 11L, 13L, 99L, 1000003L}) {
    for (long p = 1; p < q && p < 40; ++p) out.emplace_back(p, q);
  }
  return out;
}

}  // namespace

TEST(PushBit, SpecExamples) {
  const Rational beta(3, 2);
  auto r = push_bit(ConversionState::fresh(beta), 0, beta);
  EXPECT_EQ(r.state.cylinder, Interval(R(0), R(4, 3)));
  EXPECT_TRUE(r.digits.empty());

  const auto zeros = feed(beta, {0, 0, 0, 0});
  EXPECT_EQ(zeros.cylinder, Interval(R(0), R(32, 81)));
  ASSERT_EQ(zeros.emitted.size(), 1u);  // 32/81 < 1/2 but 32/81 > 1/4
  EXPECT_EQ(zeros.emitted[0], 0);
}

TEST(PushBit, LeadingOneEmitsOneAtFive) {
  // The word 1,1 never occurs for beta = 3/2 and u = 1 (its cylinder starts
  // above 1), so the leading-one example uses 1,0,0,0,0.
  const Rational beta(3, 2);
  const auto four = feed(beta, {1, 0, 0, 0});
  EXPECT_TRUE(four.emitted.empty());
  const auto five = feed(beta, {1, 0, 0, 0, 0});
  ASSERT_FALSE(five.emitted.empty());
  EXPECT_EQ(five.emitted[0], 1);
  EXPECT_EQ(five.cylinder.hi(), R(2, 3) + R(2) * R(2, 3).pow(5));
}

TEST(PushBit, RejectsMismatchedBeta) {
  EXPECT_THROW(push_bit(ConversionState::fresh(R(3, 2)), 1, R(8, 5)), ConfigError);
  EXPECT_THROW(ConversionState::fresh(R(5, 2)), DomainError);
}

TEST(KOfM, SpecExamples) {
  const auto u1 = ThresholdProcess::constant(R(1));
  EXPECT_EQ(k_of_m(R(0), 1, R(3, 2), u1).k, 4u);
  EXPECT_EQ(k_of_m(R(0), 1, R(9, 5), u1).k, 2u);
  EXPECT_EQ(*oracle::k_of_m(0, 1, oracle::q(9, 5), 1, 10), 2u);
  EXPECT_EQ(*oracle::k_of_m(0, 1, oracle::q(3, 2), 1, 10), 4u);
}

TEST(KOfM, MatchesBruteForceOracle) {
  for (const auto& beta : {R(3, 2), R(8, 5), R(9, 5)}) {
    const Rational kappa = (beta - R(1)).inverse();
    for (const auto& u : {R(1), kappa}) {
      for (const auto& x : rational_grid()) {
        for (unsigned m : {1u, 3u, 6u}) {
          const auto cap = default_k_cap(m, beta);
          const auto got = k_of_m(x, m, beta, ThresholdProcess::constant(u), cap);
          const auto ref = oracle::k_of_m(x.mpq(), m, beta.mpq(), u.mpq(), cap);
          ASSERT_EQ(got.exceeded, !ref.has_value()) << x.str();
          if (ref) {
            EXPECT_EQ(got.k, *ref) << "x=" << x.str() << " m=" << m << " beta=" << beta.str();
          }
        }
      }
    }
  }
}

TEST(KOfM, StrictlyAboveBinaryRate) {
  Prng rng(1);
  for (const auto& beta : {R(3, 2), R(9, 5)}) {
    const double rate = std::log(2.0) / std::log(beta.to_double());
    for (int i = 0; i < 200; ++i) {
      const Rational x = rng.uniform_dyadic(200);
      const unsigned m = 1 + static_cast<unsigned>(rng.below(32));
      const auto k = k_of_m(x, m, beta, ThresholdProcess::constant(R(1)));
      ASSERT_FALSE(k.exceeded);
      EXPECT_TRUE(exceeds_binary_rate(k.k, m, beta));
      EXPECT_GT(static_cast<double>(k.k), m * rate);
    }
  }
}

TEST(KOfM, DyadicStraddleHitsCap) {
  // 1/2 has no finite greedy expansion in base 3/2, so every cylinder
  // around it crosses the midpoint
  const auto k = k_of_m(R(1, 2), 1, R(3, 2), ThresholdProcess::constant(R(1)));
  EXPECT_TRUE(k.exceeded);
  EXPECT_EQ(k.k, default_k_cap(1, R(3, 2)));
  EXPECT_EQ(default_k_cap(1, R(3, 2)),
            static_cast<std::size_t>(std::ceil(4 * std::log(2.0) / std::log(1.5))) + 64);
}

TEST(KOfMAll, AgreesWithSingleQueries) {
  Prng rng(4);
  const std::vector<unsigned> ms{1, 2, 5, 9, 16, 24};
  for (int i = 0; i < 50; ++i) {
    const Rational x = rng.uniform_dyadic(160);
    const auto us = ThresholdProcess::iid_uniform(R(1), R(2));
    const std::uint64_t seed = rng.next();
    const auto all = k_of_m_all(x, ms, R(3, 2), us, seed);
    for (std::size_t j = 0; j < ms.size(); ++j) {
      const auto one = k_of_m(x, ms[j], R(3, 2), us, std::nullopt, seed);
      EXPECT_EQ(all[j].k, one.k);
      EXPECT_EQ(all[j].exceeded, one.exceeded);
    }
  }
}

// push_bit emits a_j exactly when K reaches k(j), and DigitTracker agrees
// with push_bit digit for digit.
TEST(Streaming, BatchEquivalence) {
  for (const auto& beta : {R(3, 2), R(9, 5)}) {
    const auto u1 = ThresholdProcess::constant(R(1));
    for (const auto& x : rational_grid()) {
      const std::size_t K = 40;
      const auto trace = encode(x, BetaProcess::fixed(beta), u1, K);
      auto state = ConversionState::fresh(beta);
      DigitTracker tracker(beta);
      std::vector<std::size_t> emitted_at;
      for (std::size_t k = 1; k <= K; ++k) {
        auto r = push_bit(state, trace.bits[k - 1], beta);
        state = std::move(r.state);
        for (std::size_t i = 0; i < r.digits.size(); ++i) emitted_at.push_back(k);
        const auto fresh = tracker.push(trace.bits[k - 1]);
        EXPECT_EQ(fresh, r.digits.size());
        EXPECT_EQ(tracker.digits(), state.emitted);
      }
      for (unsigned j = 1; j <= 12; ++j) {
        const auto kj = k_of_m(x, j, beta, u1);
        if (!kj.exceeded && kj.k <= K) {
          ASSERT_GE(emitted_at.size(), j);
          EXPECT_EQ(emitted_at[j - 1], kj.k);
        } else {
          EXPECT_LT(emitted_at.size(), j);
        }
      }
    }
  }
}

TEST(Streaming, DigitsMatchDoublingOracle) {
  for (const auto& beta : {R(3, 2), R(8, 5), R(9, 5)}) {
    for (const auto& x : rational_grid()) {
      const auto trace = encode(x, BetaProcess::fixed(beta), ThresholdProcess::constant(R(1)), 120);
      DigitTracker tracker(beta);
      for (auto b : trace.bits) tracker.push(b);
      const auto truth = oracle::binary_digits(x.mpq(), static_cast<unsigned>(tracker.confirmed()));
      EXPECT_EQ(tracker.digits(), truth) << x.str();
      EXPECT_EQ(binary_digits(x, static_cast<unsigned>(truth.size())), truth);
    }
  }
}

TEST(BinaryDigits, EdgeCases) {
  EXPECT_EQ(binary_digits(R(1), 4), (std::vector<std::uint8_t>{1, 1, 1, 1}));
  EXPECT_EQ(binary_digits(R(1, 2), 3), (std::vector<std::uint8_t>{1, 0, 0}));
  EXPECT_EQ(binary_digits(R(1, 3), 4), (std::vector<std::uint8_t>{0, 1, 0, 1}));
}

TEST(UncertaintyInterval, SpecExamples) {
  for (unsigned m : {1u, 4u, 16u}) {
    const std::vector<std::uint8_t> zeros(m, 0);
    const auto iv = uncertainty_interval(zeros, R(3, 2), R(9, 5));
    EXPECT_EQ(iv.lo(), R(0));
    EXPECT_EQ(iv.hi(), R(5, 4) / R(3, 2).pow(m));
  }
  for (unsigned m = 1; m <= 64; ++m) {
    std::vector<std::uint8_t> word(m, 0);
    word[0] = 1;
    const auto iv = uncertainty_interval(word, R(3, 2), R(9, 5));
    EXPECT_EQ(iv.lo(), R(5, 9));
    EXPECT_GE(iv.length(), R(1, 9));
  }
  const std::vector<std::uint8_t> one{1};
  EXPECT_EQ(uncertainty_interval(one, R(3, 2), R(3, 2)), beta_cylinder(one, R(3, 2)));
}
