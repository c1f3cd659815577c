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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "betaenc/encoder.hpp"
#include "betaenc/rational.hpp"

namespace betaenc {

// Bit files: 8-byte little-endian bit count, then the bits packed
// most-significant-bit first, zero padded to a whole byte.
void write_bit_file(const std::string& path, const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> read_bit_file(const std::string& path);
std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& bytes, std::uint64_t count);

// "0101..." to bits; anything else is a ParseError.
std::vector<std::uint8_t> parse_bit_string(std::string_view text);
std::string bit_string(const std::vector<std::uint8_t>& bits);

// Comma-separated "p/q" literals.
std::vector<Rational> parse_rational_list(std::string_view text);
std::vector<unsigned> parse_unsigned_list(std::string_view text);

// Beta process grammar:
//   3/2                      fixed
//   seq:3/2,8/5,...          explicit sequence
//   iid:3/2,8/5;1/2,1/2      i.i.d. finite support (values ; probabilities)
//   seeded:3/2,9/5           seeded realization in [lo, hi], keyed by `seed`
BetaProcess parse_beta_process(std::string_view text, std::uint64_t seed);

// Threshold grammar:
//   1                        constant
//   seq:1,6/5,...            explicit sequence
//   iid                      fresh i.i.d. uniform on [1, (beta_max - 1)^-1] per run
//   iid:1,3/2                fresh i.i.d. uniform on [lo, hi]
//   seeded:1,3/2             fixed seeded realization keyed by `seed`
ThresholdProcess parse_threshold_process(std::string_view text, const Rational& beta_max,
                                         std::uint64_t seed);

}  // namespace betaenc
