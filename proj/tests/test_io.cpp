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

#include <filesystem>
#include <fstream>

#include "betaenc/errors.hpp"
#include "betaenc/io.hpp"

using namespace betaenc;

TEST(BitFile, RoundTripAndLayout) {
  const auto path = (std::filesystem::temp_directory_path() / "betaenc_io_test.bin").string();
  const std::vector<std::uint8_t> bits{1, 0, 1, 1, 0, 0, 0, 0, 1, 1};
  write_bit_file(path, bits);
  std::ifstream in(path, std::ios::binary);
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ASSERT_EQ(raw.size(), 10u);
  EXPECT_EQ(raw[0], 10);  // little-endian count
  for (int i = 1; i < 8; ++i) EXPECT_EQ(raw[i], 0);
  EXPECT_EQ(raw[8], 0xB0);  // 1011 0000, MSB first
  EXPECT_EQ(raw[9], 0xC0);  // 11 padded with zeros
  EXPECT_EQ(read_bit_file(path), bits);
  std::filesystem::remove(path);
}

TEST(BitFile, RejectsTruncatedFiles) {
  const auto path = (std::filesystem::temp_directory_path() / "betaenc_io_bad.bin").string();
  {
    std::ofstream out(path, std::ios::binary);
    const char header[8] = {64, 0, 0, 0, 0, 0, 0, 0};
    out.write(header, 8);
    out.put(1);
  }
  EXPECT_THROW(read_bit_file(path), ParseError);
  std::filesystem::remove(path);
  EXPECT_THROW(read_bit_file(path), ConfigError);
}

TEST(Grammar, BetaProcesses) {
  EXPECT_EQ(parse_beta_process("3/2", 0).kind(), BetaProcess::Kind::Fixed);
  const auto iid = parse_beta_process("iid:3/2,8/5;1/2,1/2", 0);
  EXPECT_EQ(iid.kind(), BetaProcess::Kind::IidFiniteSupport);
  EXPECT_EQ(iid.beta_min(), Rational(3, 2));
  EXPECT_EQ(iid.beta_max(), Rational(8, 5));
  const auto seq = parse_beta_process("seq:3/2,9/5", 0);
  EXPECT_EQ(seq.values().size(), 2u);
  EXPECT_EQ(parse_beta_process("seeded:3/2,9/5", 4).seed(), 4u);
  EXPECT_THROW(parse_beta_process("1.5", 0), ParseError);
  EXPECT_THROW(parse_beta_process("iid:3/2,8/5", 0), ParseError);
}

TEST(Grammar, ThresholdProcesses) {
  EXPECT_EQ(parse_threshold_process("1", Rational(3, 2), 0).kind(), ThresholdProcess::Kind::Constant);
  const auto iid = parse_threshold_process("iid", Rational(9, 5), 0);
  EXPECT_EQ(iid.kind(), ThresholdProcess::Kind::IidUniform);
  EXPECT_EQ(iid.hi(), Rational(5, 4));
  EXPECT_EQ(parse_threshold_process("seeded:1,2", Rational(3, 2), 6).seed(), 6u);
  EXPECT_EQ(parse_threshold_process("seq:1,6/5", Rational(3, 2), 0).values().size(), 2u);
  EXPECT_THROW(parse_threshold_process("iid:1", Rational(3, 2), 0), ParseError);
}

TEST(Grammar, Lists) {
  EXPECT_EQ(parse_unsigned_list("10, 20,40"), (std::vector<unsigned>{10, 20, 40}));
  EXPECT_THROW(parse_unsigned_list("10,-2"), ParseError);
  EXPECT_EQ(parse_bit_string("0110"), (std::vector<std::uint8_t>{0, 1, 1, 0}));
  EXPECT_THROW(parse_bit_string("012"), ParseError);
}
