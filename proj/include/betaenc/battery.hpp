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
#include <span>
#include <string>
#include <vector>

namespace betaenc {

struct TestResult {
  std::string name;
  double statistic = 0;
  double p_value = 0;
  bool pass = false;
};

// Minimum stream lengths, in bits.
inline constexpr std::size_t kMonobitMinBits = 100;
inline constexpr std::size_t kRunsMinBits = 100;
inline constexpr std::size_t kSerialMinBits = 64;
inline constexpr std::size_t kApproxEntropyMinBits = 256;

TestResult monobit_test(std::span<const std::uint8_t> bits, double significance);
// Fails with p = 0 when the ones fraction is too far from 1/2 for the
// runs statistic to be meaningful.
TestResult runs_test(std::span<const std::uint8_t> bits, double significance);
// Overlapping 2-bit patterns, first difference statistic (2 degrees of freedom).
TestResult serial_test(std::span<const std::uint8_t> bits, double significance);
TestResult approximate_entropy_test(std::span<const std::uint8_t> bits, double significance);

// monobit, runs, serial, approximate-entropy in that order.
std::vector<TestResult> run_battery(std::span<const std::uint8_t> bits, double significance);

bool all_pass(const std::vector<TestResult>& results);

struct CalibrationRow {
  std::string name;
  std::size_t rejections = 0;
  double rate = 0;
  bool within_tolerance = false;
};

struct Calibration {
  std::string prng;
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  std::size_t length = 0;
  double significance = 0;
  double tolerance = 0;  // 3 sqrt(a(1-a)/runs)
  std::vector<CalibrationRow> rows;
  bool passed() const;
};

// Rejection rate of each test on `runs` independent PRNG streams.
Calibration calibrate_battery(std::uint64_t seed, std::size_t runs = 1000,
                              std::size_t length = 10000, double significance = 0.01);

}  // namespace betaenc
