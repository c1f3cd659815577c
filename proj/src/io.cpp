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

#include "betaenc/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>

#include "betaenc/errors.hpp"

namespace betaenc {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::pair<Rational, Rational> parse_range(std::string_view text, const char* what) {
  const auto r = parse_rational_list(text);
  if (r.size() != 2) throw ParseError(std::string(what) + " range needs exactly two values: lo,hi");
  return {r[0], r[1]};
}

}  // namespace

std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] & 1u) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return bytes;
}

std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& bytes, std::uint64_t count) {
  if (bytes.size() * 8 < count) throw ParseError("bit file is truncated");
  std::vector<std::uint8_t> bits(count);
  for (std::uint64_t i = 0; i < count; ++i) bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
  return bits;
}

void write_bit_file(const std::string& path, const std::vector<std::uint8_t>& bits) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  std::uint64_t count = bits.size();
  unsigned char header[8];
  for (int i = 0; i < 8; ++i) header[i] = static_cast<unsigned char>((count >> (8 * i)) & 0xffu);
  out.write(reinterpret_cast<const char*>(header), 8);
  const auto bytes = pack_bits(bits);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ConfigError("write to " + path + " failed");
}

std::vector<std::uint8_t> read_bit_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < 8) throw ParseError(path + ": missing 8-byte length header");
  std::uint64_t count = 0;
  for (int i = 7; i >= 0; --i) count = (count << 8) | data[i];
  const std::vector<std::uint8_t> body(data.begin() + 8, data.end());
  if (body.size() != (count + 7) / 8) {
    throw ParseError(path + ": header declares " + std::to_string(count) + " bits but body has " +
                     std::to_string(body.size()) + " bytes");
  }
  return unpack_bits(body, count);
}

std::vector<std::uint8_t> parse_bit_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw ParseError("bit strings contain only 0 and 1");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return bits;
}

std::string bit_string(const std::vector<std::uint8_t>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  for (auto part : split(text, ',')) out.push_back(Rational::parse(trim(part)));
  return out;
}

std::vector<unsigned> parse_unsigned_list(std::string_view text) {
  std::vector<unsigned> out;
  for (auto part : split(text, ',')) {
    part = trim(part);
    unsigned v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw ParseError("not a nonnegative integer: '" + std::string(part) + "'");
    }
    out.push_back(v);
  }
  return out;
}

BetaProcess parse_beta_process(std::string_view text, std::uint64_t seed) {
  text = trim(text);
  if (text.starts_with("seq:")) return BetaProcess::explicit_sequence(parse_rational_list(text.substr(4)));
  if (text.starts_with("iid:")) {
    const auto halves = split(text.substr(4), ';');
    if (halves.size() != 2) throw ParseError("iid beta needs 'values;probabilities'");
    return BetaProcess::iid_finite_support(parse_rational_list(halves[0]),
                                           parse_rational_list(halves[1]));
  }
  if (text.starts_with("seeded:")) {
    const auto [lo, hi] = parse_range(text.substr(7), "seeded beta");
    return BetaProcess::seeded(seed, lo, hi);
  }
  return BetaProcess::fixed(Rational::parse(text));
}

ThresholdProcess parse_threshold_process(std::string_view text, const Rational& beta_max,
                                         std::uint64_t seed) {
  text = trim(text);
  if (text == "iid") return ThresholdProcess::iid_uniform(Rational(1), (beta_max - Rational(1)).inverse());
  if (text.starts_with("iid:")) {
    const auto [lo, hi] = parse_range(text.substr(4), "iid threshold");
    return ThresholdProcess::iid_uniform(lo, hi);
  }
  if (text.starts_with("seq:")) return ThresholdProcess::explicit_sequence(parse_rational_list(text.substr(4)));
  if (text.starts_with("seeded:")) {
    const auto [lo, hi] = parse_range(text.substr(7), "seeded threshold");
    return ThresholdProcess::seeded(seed, lo, hi);
  }
  return ThresholdProcess::constant(Rational::parse(text));
}

}  // namespace betaenc
