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

#include <bit>

#include "betaenc/errors.hpp"
#include "betaenc/extract.hpp"
#include "betaenc/prng.hpp"

using namespace betaenc;

namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

std::vector<std::uint8_t> unpack(std::uint64_t w, unsigned len) {
  std::vector<std::uint8_t> out(len);
  for (unsigned i = 0; i < len; ++i) out[i] = (w >> (len - 1 - i)) & 1u;
  return out;
}

std::uint64_t pack(const std::vector<std::uint8_t>& bits) {
  std::uint64_t w = 0;
  for (auto b : bits) w = (w << 1) | b;
  return w;
}

FiniteDistribution random_distribution(Prng& rng, unsigned n) {
  std::map<std::uint64_t, Rational> entries;
  long total = 0;
  std::vector<long> weights(std::size_t{1} << n);
  for (auto& w : weights) {
    w = static_cast<long>(rng.below(5));
    total += w;
  }
  if (total == 0) {
    weights[0] = 1;
    total = 1;
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0) entries.emplace(i, R(weights[i], total));
  }
  return FiniteDistribution(n, entries);
}

}  // namespace

TEST(TvDistance, Examples) {
  const auto u1 = FiniteDistribution::uniform(1);
  EXPECT_EQ(tv_distance(u1, u1), R(0));
  EXPECT_EQ(tv_distance(FiniteDistribution::point_mass(1, 0), u1), R(1, 2));
  EXPECT_EQ(tv_distance(FiniteDistribution::point_mass(3, 1), FiniteDistribution::point_mass(3, 6)), R(1));
  EXPECT_THROW(tv_distance(u1, FiniteDistribution::uniform(2)), DomainError);
}

TEST(TvDistance, IsAMetric) {
  Prng rng(10);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_distribution(rng, 3);
    const auto q = random_distribution(rng, 3);
    const auto r = random_distribution(rng, 3);
    EXPECT_EQ(tv_distance(p, p), R(0));
    EXPECT_EQ(tv_distance(p, q), tv_distance(q, p));
    EXPECT_LE(tv_distance(p, r), tv_distance(p, q) + tv_distance(q, r));
    if (p.entries() != q.entries()) EXPECT_GT(tv_distance(p, q), R(0));
  }
}

TEST(FiniteDistribution, Validation) {
  EXPECT_THROW(FiniteDistribution(2, {{0, R(1, 2)}}), DomainError);
  EXPECT_THROW(FiniteDistribution(2, {{4, R(1)}}), DomainError);
  EXPECT_TRUE(FiniteDistribution::uniform(5).min_entropy_at_least(R(5)));
  EXPECT_FALSE(FiniteDistribution::uniform(5).min_entropy_at_least(R(51, 10)));
}

TEST(AdversarialSource, Examples) {
  const auto parity = [](std::uint64_t x) { return static_cast<std::uint8_t>(std::popcount(x) & 1); };
  const auto s = adversarial_source(parity, 3);
  EXPECT_EQ(s.entries().size(), 4u);
  for (const auto& [w, p] : s.entries()) EXPECT_EQ(parity(w), 0);
  EXPECT_EQ(s.max_probability(), R(1, 4));
  EXPECT_EQ(tv_distance(s.push_forward(parity, 1), FiniteDistribution::point_mass(1, 0)), R(0));

  const auto one = adversarial_source([](std::uint64_t) { return std::uint8_t{1}; }, 4);
  EXPECT_EQ(one.entries().size(), 16u);

  const auto first = adversarial_source([](std::uint64_t x) { return static_cast<std::uint8_t>(x >> 1); }, 2);
  EXPECT_EQ(first.entries().size(), 2u);
  EXPECT_EQ(first.probability(0b00), R(1, 2));
  EXPECT_EQ(first.probability(0b01), R(1, 2));
  EXPECT_TRUE(first.min_entropy_at_least(R(1)));
  EXPECT_THROW(adversarial_source(parity, 30), ResourceError);
}

TEST(AdversarialSource, RandomTruthTables) {
  Prng rng(3);
  for (int t = 0; t < 20; ++t) {
    const unsigned m = 2 + static_cast<unsigned>(rng.below(7));
    std::vector<std::uint8_t> table(std::size_t{1} << m);
    for (auto& v : table) v = static_cast<std::uint8_t>(rng.next() & 1);
    const auto ext = [&](std::uint64_t x) { return table[x]; };
    const auto s = adversarial_source(ext, m);
    EXPECT_TRUE(s.min_entropy_at_least(R(m - 1)));
    const auto out = s.push_forward(ext, 1);
    EXPECT_EQ(out.entries().size(), 1u);
    EXPECT_EQ(tv_distance(out, FiniteDistribution::uniform(1)), R(1, 2));
  }
}

TEST(SeededExtract, LinearAndMatchesPackedHash) {
  Prng rng(6);
  for (int t = 0; t < 200; ++t) {
    const unsigned m = 4 + static_cast<unsigned>(rng.below(12));
    const unsigned n = 1 + static_cast<unsigned>(rng.below(m));
    const unsigned d = m + n - 1;
    const std::uint64_t zw = rng.next() & ((std::uint64_t{1} << d) - 1);
    const std::uint64_t xa = rng.next() & ((std::uint64_t{1} << m) - 1);
    const std::uint64_t xb = rng.next() & ((std::uint64_t{1} << m) - 1);
    const auto z = unpack(zw, d);
    const auto ya = seeded_extract(unpack(xa, m), z, n);
    const auto yb = seeded_extract(unpack(xb, m), z, n);
    const auto yab = seeded_extract(unpack(xa ^ xb, m), z, n);
    EXPECT_EQ(pack(yab), pack(ya) ^ pack(yb));
    EXPECT_EQ(pack(seeded_extract(std::vector<std::uint8_t>(m, 0), z, n)), 0u);
    const ToeplitzHash h(m, n, zw);
    EXPECT_EQ(h(xa), pack(ya));
  }
  // Toeplitz structure: y_i = sum_j z_(j - i + n) x_j (1-based)
  const std::vector<std::uint8_t> x{1, 0, 0}, z{0, 1, 1, 0};
  EXPECT_EQ(seeded_extract(x, z, 2), (std::vector<std::uint8_t>{1, 0}));
  EXPECT_THROW(seeded_extract(x, std::vector<std::uint8_t>{0, 1}, 2), DomainError);
}

TEST(TwoSourceExtract, Examples) {
  EXPECT_EQ(two_source_extract(std::vector<std::uint8_t>{0, 0}, std::vector<std::uint8_t>{1, 1}), 0);
  EXPECT_EQ(two_source_extract(std::vector<std::uint8_t>{1, 1}, std::vector<std::uint8_t>{1, 1}), 0);
  EXPECT_EQ(two_source_extract(std::vector<std::uint8_t>{1, 0}, std::vector<std::uint8_t>{1, 1}), 1);
  EXPECT_THROW(two_source_extract(std::vector<std::uint8_t>{1}, std::vector<std::uint8_t>{1, 1}), DomainError);
}

TEST(SeededAverageTv, MatchesDirectComputation) {
  Prng rng(8);
  const unsigned m = 5, n = 2, d = m + n - 1;
  for (int t = 0; t < 10; ++t) {
    std::vector<std::uint64_t> support;
    for (std::uint64_t x = 0; x < 32; ++x) {
      if (rng.below(3) == 0) support.push_back(x);
    }
    if (support.empty()) support.push_back(7);
    const auto source = FiniteDistribution::flat(m, support);
    Rational sum(0);
    for (std::uint64_t z = 0; z < (std::uint64_t{1} << d); ++z) {
      const auto out = source.push_forward(
          [&](std::uint64_t x) { return pack(seeded_extract(unpack(x, m), unpack(z, d), n)); }, n);
      sum += tv_distance(out, FiniteDistribution::uniform(n));
    }
    EXPECT_EQ(seeded_average_tv(support, m, n), sum / Rational(1L << d));
  }
}

TEST(LeftoverHash, BoundComparison) {
  // (2 tv)^2 <= 2^(n-k)
  EXPECT_TRUE(within_leftover_hash_bound(R(1, 4), 2, 4));
  EXPECT_FALSE(within_leftover_hash_bound(R(1, 3), 2, 4));
}

TEST(WorstFlatPartner, MatchesBruteForce) {
  const unsigned m = 3;
  Prng rng(21);
  for (int t = 0; t < 10; ++t) {
    std::vector<std::uint64_t> xs;
    for (std::uint64_t x = 0; x < 8; ++x) {
      if (rng.below(2)) xs.push_back(x);
    }
    if (xs.empty()) xs.push_back(3);
    for (std::size_t size = 1; size <= 8; ++size) {
      Rational best(0);
      for (std::uint64_t mask = 0; mask < 256; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
        std::vector<std::uint64_t> ys;
        for (std::uint64_t y = 0; y < 8; ++y) {
          if ((mask >> y) & 1) ys.push_back(y);
        }
        best = max(best, two_source_tv(xs, ys, m));
      }
      const auto worst = worst_flat_partner(xs, m, size);
      EXPECT_EQ(worst.tv, best);
      EXPECT_EQ(two_source_tv(xs, worst.support, m), best);
    }
  }
}

TEST(TwoSource, Precondition) {
  // |S||T| eps^2 >= 2^(m+2)
  EXPECT_TRUE(two_source_precondition(64, 64, 6, R(1, 2)));
  EXPECT_FALSE(two_source_precondition(16, 16, 6, R(1, 2)));
}

TEST(Pipeline, RateAndBudget) {
  EXPECT_EQ(block_length_for_rate(8, R(1, 2), R(9, 5)), 19u);
  EXPECT_TRUE(within_entropy_budget(8, 48, R(3, 2), R(3, 2)));
  EXPECT_FALSE(within_entropy_budget(30, 48, R(3, 2), R(3, 2)));
  EXPECT_TRUE(supports_two_source(R(3, 2)));
  EXPECT_FALSE(supports_two_source(R(7, 5)));
  EXPECT_FALSE(supports_two_source(R(1, 1) + R(41, 100)));
}

TEST(Pipeline, SeededModes) {
  Prng rng(1);
  std::vector<std::uint8_t> stream(1000);
  for (auto& b : stream) b = rng.next() & 1;
  PipelineConfig cfg;
  cfg.block_bits = 32;
  cfg.output_bits = 4;
  cfg.gap_bits = 8;
  cfg.seed = std::vector<std::uint8_t>(35, 1);
  const auto r = pipeline_extract(stream, cfg);
  EXPECT_EQ(r.report.blocks_used, 25u);  // 1000 / 40
  EXPECT_EQ(r.bits.size(), 100u);
  EXPECT_EQ(r.report.seed_source, "explicit");
  std::vector<std::uint8_t> block(stream.begin() + 40, stream.begin() + 72);
  const auto y = seeded_extract(block, *cfg.seed, 4);
  EXPECT_TRUE(std::equal(y.begin(), y.end(), r.bits.begin() + 4));

  cfg.seed.reset();
  const auto weak = pipeline_extract(stream, cfg);
  EXPECT_NE(weak.report.seed_source.find("weak"), std::string::npos);
  EXPECT_FALSE(weak.report.warnings.empty());

  cfg.output_bits = 0;
  EXPECT_TRUE(pipeline_extract(stream, cfg).bits.empty());

  cfg.output_bits = 30;
  EXPECT_THROW(pipeline_extract(stream, cfg), ConfigError);
}

TEST(Pipeline, TwoSourceWarning) {
  std::vector<std::uint8_t> stream(400, 1);
  PipelineConfig cfg;
  cfg.mode = ExtractMode::TwoSource;
  cfg.block_bits = 16;
  cfg.output_bits = 1;
  cfg.beta_min = R(7, 5);
  cfg.beta_max = R(3, 2);
  const auto r = pipeline_extract(stream, cfg);
  bool cited = false;
  for (const auto& w : r.report.warnings) cited |= w.find("beta_min > sqrt(2)") != std::string::npos;
  EXPECT_TRUE(cited);
  EXPECT_EQ(r.bits.size(), 12u);  // 400 / 32 pairs
  for (auto b : r.bits) EXPECT_EQ(b, 0);  // 16 ones dotted with 16 ones

  cfg.beta_min = R(3, 2);
  cfg.beta_max = R(9, 5);
  for (const auto& w : pipeline_extract(stream, cfg).report.warnings) {
    EXPECT_EQ(w.find("beta_min > sqrt(2)"), std::string::npos);
  }
  cfg.output_bits = 2;
  EXPECT_THROW(pipeline_extract(stream, cfg), ConfigError);
}
