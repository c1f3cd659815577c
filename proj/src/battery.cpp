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

#include "betaenc/battery.hpp"

#include <algorithm>
#include <array>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "betaenc/errors.hpp"
#include "betaenc/prng.hpp"

namespace betaenc {
namespace {

void require_length(std::span<const std::uint8_t> bits, std::size_t min, const char* test) {
  if (bits.size() < min) {
    throw DomainError(std::string(test) + ": stream has " + std::to_string(bits.size()) +
                      " bits; minimums are monobit >= 100, runs >= 100, serial >= 64, "
                      "approximate-entropy >= 256");
  }
}

TestResult make(const char* name, double statistic, double p, double significance) {
  p = std::clamp(p, 0.0, 1.0);
  return TestResult{name, statistic, p, p >= significance};
}

double igamc(double a, double x) {
  if (x <= 0) return 1.0;
  return boost::math::gamma_q(a, x);
}

// Overlapping pattern counts of length `len`, wrapping around the end.
std::vector<std::size_t> pattern_counts(std::span<const std::uint8_t> bits, unsigned len) {
  std::vector<std::size_t> counts(std::size_t{1} << len, 0);
  if (len == 0) {
    counts[0] = bits.size();
    return counts;
  }
  const std::size_t n = bits.size();
  const std::size_t mask = counts.size() - 1;
  std::size_t w = 0;
  for (unsigned i = 0; i + 1 < len; ++i) w = (w << 1) | (bits[i] & 1u);
  for (std::size_t i = 0; i < n; ++i) {
    w = ((w << 1) | (bits[(i + len - 1) % n] & 1u)) & mask;
    ++counts[w];
  }
  return counts;
}

double psi_squared(std::span<const std::uint8_t> bits, unsigned len) {
  if (len == 0) return 0.0;
  const double n = static_cast<double>(bits.size());
  double sum = 0;
  for (auto c : pattern_counts(bits, len)) sum += static_cast<double>(c) * static_cast<double>(c);
  return sum * std::ldexp(1.0, static_cast<int>(len)) / n - n;
}

double phi(std::span<const std::uint8_t> bits, unsigned len) {
  const double n = static_cast<double>(bits.size());
  double sum = 0;
  for (auto c : pattern_counts(bits, len)) {
    if (c > 0) {
      const double p = static_cast<double>(c) / n;
      sum += p * std::log(p);
    }
  }
  return sum;
}

}  // namespace

TestResult monobit_test(std::span<const std::uint8_t> bits, double significance) {
  require_length(bits, kMonobitMinBits, "monobit");
  long s = 0;
  for (auto b : bits) s += (b & 1u) ? 1 : -1;
  const double stat = std::abs(static_cast<double>(s)) / std::sqrt(static_cast<double>(bits.size()));
  return make("monobit", stat, std::erfc(stat / std::sqrt(2.0)), significance);
}

TestResult runs_test(std::span<const std::uint8_t> bits, double significance) {
  require_length(bits, kRunsMinBits, "runs");
  const double n = static_cast<double>(bits.size());
  std::size_t ones = 0;
  std::size_t runs = 1;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    ones += bits[i] & 1u;
    if (i > 0 && (bits[i] & 1u) != (bits[i - 1] & 1u)) ++runs;
  }
  const double pi = static_cast<double>(ones) / n;
  const double v = static_cast<double>(runs);
  if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(n)) return make("runs", v, 0.0, significance);
  const double spread = pi * (1.0 - pi);
  const double p = std::erfc(std::abs(v - 2.0 * n * spread) / (2.0 * std::sqrt(2.0 * n) * spread));
  return make("runs", v, p, significance);
}

TestResult serial_test(std::span<const std::uint8_t> bits, double significance) {
  require_length(bits, kSerialMinBits, "serial");
  const double del = psi_squared(bits, 2) - psi_squared(bits, 1);
  return make("serial", del, igamc(1.0, del / 2.0), significance);
}

TestResult approximate_entropy_test(std::span<const std::uint8_t> bits, double significance) {
  require_length(bits, kApproxEntropyMinBits, "approximate-entropy");
  const double n = static_cast<double>(bits.size());
  const double apen = phi(bits, 2) - phi(bits, 3);
  const double chi2 = 2.0 * n * (std::log(2.0) - apen);
  return make("approximate-entropy", chi2, igamc(2.0, chi2 / 2.0), significance);
}

std::vector<TestResult> run_battery(std::span<const std::uint8_t> bits, double significance) {
  if (!(significance > 0.0 && significance < 1.0)) {
    throw ConfigError("significance must lie in (0,1)");
  }
  require_length(bits, kApproxEntropyMinBits, "battery");
  return {monobit_test(bits, significance), runs_test(bits, significance),
          serial_test(bits, significance), approximate_entropy_test(bits, significance)};
}

bool all_pass(const std::vector<TestResult>& results) {
  for (const auto& r : results) {
    if (!r.pass) return false;
  }
  return true;
}

bool Calibration::passed() const {
  for (const auto& r : rows) {
    if (!r.within_tolerance) return false;
  }
  return !rows.empty();
}

Calibration calibrate_battery(std::uint64_t seed, std::size_t runs, std::size_t length,
                              double significance) {
  if (runs == 0) throw ConfigError("calibration needs at least one run");
  Calibration cal;
  cal.prng = std::string(Prng::kAlgorithm);
  cal.seed = seed;
  cal.runs = runs;
  cal.length = length;
  cal.significance = significance;
  cal.tolerance = 3.0 * std::sqrt(significance * (1.0 - significance) / static_cast<double>(runs));
  std::array<std::size_t, 4> rejections{};
  std::array<std::string, 4> names;
  Prng root(seed);
  std::vector<std::uint8_t> bits(length);
  for (std::size_t r = 0; r < runs; ++r) {
    Prng rng = root.split(r);
    for (std::size_t i = 0; i < length; i += 64) {
      const std::uint64_t word = rng.next();
      for (std::size_t j = 0; j < 64 && i + j < length; ++j) bits[i + j] = (word >> (63 - j)) & 1u;
    }
    const auto results = run_battery(bits, significance);
    for (std::size_t t = 0; t < results.size(); ++t) {
      names[t] = results[t].name;
      if (!results[t].pass) ++rejections[t];
    }
  }
  for (std::size_t t = 0; t < names.size(); ++t) {
    CalibrationRow row;
    row.name = names[t];
    row.rejections = rejections[t];
    row.rate = static_cast<double>(rejections[t]) / static_cast<double>(runs);
    row.within_tolerance = std::abs(row.rate - significance) <= cal.tolerance;
    cal.rows.push_back(row);
  }
  return cal;
}

}  // namespace betaenc
