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

#include "betaenc/prng.hpp"

#include "betaenc/errors.hpp"

namespace betaenc {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Prng::Prng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t a = seed;
  std::uint64_t b = stream ^ 0xd1b54a32d192ed03ULL;
  key_ = splitmix64(a) ^ rotl(splitmix64(b), 17);
  std::uint64_t x = key_;
  for (auto& word : s_) word = splitmix64(x);
}

std::uint64_t Prng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Prng::below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("Prng::below(0)");
  // Lemire-style rejection keeps the result exactly uniform.
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t r;
  do {
    r = next();
  } while (r >= limit);
  return r % bound;
}

double Prng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

mpz_class Prng::random_bits(unsigned long count) {
  mpz_class v = 0;
  unsigned long filled = 0;
  while (filled < count) {
    const unsigned long take = std::min<unsigned long>(64, count - filled);
    std::uint64_t w = next();
    if (take < 64) w >>= (64 - take);
    v <<= take;
    v += mpz_class(static_cast<unsigned long>(w));
    filled += take;
  }
  return v;
}

Rational Prng::uniform_dyadic(unsigned long bits) {
  return Rational::dyadic(random_bits(bits), bits);
}

Rational Prng::uniform_between(const Rational& lo, const Rational& hi, unsigned long bits) {
  if (hi < lo) throw DomainError("uniform_between with hi < lo");
  return lo + (hi - lo) * uniform_dyadic(bits);
}

}  // namespace betaenc
