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

#include "betaenc/errors.hpp"
#include "betaenc/lochs.hpp"
#include "oracles.hpp"

using namespace betaenc;

namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

LochsExperiment small_experiment(const Rational& beta, unsigned workers) {
  LochsExperiment exp;
  exp.beta = beta;
  exp.m_values = {8, 16, 32};
  exp.n_samples = 400;
  exp.rng_seed = 12;
  exp.workers = workers;
  return exp;
}

}  // namespace

TEST(Lochs, TargetsFromLogs) {
  EXPECT_NEAR(std::log(2.0) / std::log(1.5), 1.709511291351455, 1e-12);
  EXPECT_NEAR(std::log(2.0) / std::log(1.8), 1.1792495848393761, 1e-12);
  const auto report = run_lochs(small_experiment(R(9, 5), 2));
  for (const auto& row : report.rows) EXPECT_DOUBLE_EQ(row.target, std::log(2.0) / std::log(1.8));
}

TEST(Lochs, CEpsilon) {
  EXPECT_NEAR(c_of_eps(R(9, 5), R(1, 10)), std::log(20.0) / std::log(1.8) + 1, 1e-12);
  EXPECT_NEAR(c_of_eps(R(3, 2), R(1, 2)), std::log(4.0) / std::log(1.5) + 1, 1e-12);
  const double r = std::log(2.0) / std::log(1.5);
  const double c = c_of_eps(R(3, 2), R(1, 10));
  for (unsigned m : {8u, 16u, 40u}) {
    for (std::size_t k = m; k < 4 * m; ++k) {
      const double excess = static_cast<double>(k) - m * r;
      if (std::abs(excess - c) > 1e-9) EXPECT_EQ(exceeds_c_eps(k, m, R(3, 2), R(1, 10)), excess > c);
    }
  }
}

TEST(Lochs, ReportIsDeterministicAcrossWorkers) {
  const auto a = run_lochs(small_experiment(R(3, 2), 1));
  const auto b = run_lochs(small_experiment(R(3, 2), 4));
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].mean_k, b.rows[i].mean_k);
    EXPECT_EQ(a.rows[i].max_excess, b.rows[i].max_excess);
    EXPECT_EQ(a.rows[i].by_eps[2].above_c_eps, b.rows[i].by_eps[2].above_c_eps);
  }
  EXPECT_EQ(a.prng, std::string(Prng::kAlgorithm));
}

TEST(Lochs, LowerBoundAlwaysHolds) {
  for (const auto& beta : {R(3, 2), R(9, 5)}) {
    const auto report = run_lochs(small_experiment(beta, 2));
    for (const auto& row : report.rows) {
      EXPECT_EQ(row.lower_bound_violations, 0u);
      EXPECT_EQ(row.cap_exceeded, 0u);
      EXPECT_GT(row.min_excess, 0.0);
    }
  }
}

TEST(Lochs, PrecisionRule) {
  EXPECT_EQ(required_precision_bits(R(3, 2), 64),
            static_cast<unsigned long>(std::ceil(4 * 64 * std::log(2.0) / std::log(1.5))));
  auto exp = small_experiment(R(3, 2), 1);
  exp.precision_bits = 8;
  EXPECT_THROW(run_lochs(exp), ConfigError);
  exp.precision_bits.reset();
  const auto report = run_lochs(exp);
  EXPECT_GE(report.precision_bits, required_precision_bits(R(3, 2), 32));
  EXPECT_LT(report.log2_boundary_event_bound, -40.0);
}

TEST(Lochs, ConvergenceInProbability) {
  LochsExperiment exp;
  exp.beta = R(3, 2);
  exp.m_values = {8, 16, 32, 64};
  exp.n_samples = 1500;
  exp.rng_seed = 3;
  exp.workers = 4;
  exp.eps = {R(1, 4)};
  const auto linear = run_lochs(exp);
  const double se = 2 * std::sqrt(0.25 / 1500.0);
  for (std::size_t i = 1; i < linear.rows.size(); ++i) {
    EXPECT_LE(linear.rows[i].by_eps[0].deviation_tail_fraction,
              linear.rows[i - 1].by_eps[0].deviation_tail_fraction + se);
  }
  exp.scaling = Scaling::Sqrt;
  const auto sqrt_scaled = run_lochs(exp);
  EXPECT_LT(sqrt_scaled.rows.back().scaled_variance, sqrt_scaled.rows.front().scaled_variance);
}

TEST(Kbar, ExactCeiling) {
  for (const auto& beta : {R(3, 2), R(8, 5), R(9, 5)}) {
    for (const auto& eps : {R(1, 2), R(1, 10)}) {
      for (unsigned m = 1; m <= 40; ++m) {
        const long double v = (1 + eps.to_double()) * m * std::log(2.0L) / std::log(static_cast<long double>(beta.to_double()));
        const auto k = kbar(beta, m, eps);
        if (std::abs(v - std::round(v)) > 1e-9) EXPECT_EQ(k, static_cast<std::size_t>(std::ceil(v)));
      }
    }
  }
  EXPECT_EQ(kbar(R(3, 2), 3, R(1, 2)), 8u);
  EXPECT_EQ(kbar(R(3, 2), 4, R(1, 2)), 11u);
  EXPECT_EQ(kbar(R(3, 2), 5, R(1, 2)), 13u);
}

TEST(PmMeasure, ExactValuesAgainstOracle) {
  const struct {
    unsigned m;
    Rational value;
  } frozen[] = {{3, R(3655, 6561)}, {4, R(6697, 19683)}, {5, R(509441, 1594323)}};
  for (const auto& f : frozen) {
    const auto got = pm_measure_exact(R(3, 2), R(1), f.m, R(1, 2));
    EXPECT_EQ(got.measure.mpq(), oracle::pm_measure(oracle::q(3, 2), f.m, got.kbar));
    EXPECT_EQ(got.measure, f.value);
    EXPECT_TRUE(got.within_bound);
    // 2 * 2^(-m/2), compared after squaring
    EXPECT_LE(got.measure * got.measure, R(4) * pow2(-static_cast<long>(f.m)));
  }
  EXPECT_LE(pm_measure_exact(R(3, 2), R(1), 4, R(1, 2)).measure, R(1, 2));
}

TEST(PmMeasure, MonotoneInOrder) {
  for (unsigned m : {2u, 3u, 4u}) {
    Rational prev(2);
    for (std::size_t k = 1; k <= 12; ++k) {
      const auto pm = pm_measure_at(R(3, 2), R(1), m, k, R(1, 2));
      EXPECT_LE(pm.measure, prev);
      EXPECT_EQ(pm.measure.mpq(), oracle::pm_measure(oracle::q(3, 2), m, k));
      prev = pm.measure;
    }
  }
}

TEST(PmMeasure, BelowTwoPow) {
  // (r/2)^b <= 2^(-a m) with eps = a/b
  EXPECT_TRUE(below_two_pow(R(1, 2), R(1, 2), 4));
  EXPECT_FALSE(below_two_pow(R(51, 100), R(1, 2), 4));
  EXPECT_TRUE(below_two_pow(R(2) * pow2(-5) * R(1, 1), R(1), 5));
}
