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

#include "betaenc/betaenc.h"

#include <algorithm>
#include <exception>
#include <new>
#include <string>

#include "betaenc/converter.hpp"
#include "betaenc/encoder.hpp"
#include "betaenc/entropy.hpp"
#include "betaenc/errors.hpp"
#include "betaenc/io.hpp"
#include "commands.hpp"

#ifndef BETAENC_VERSION
#define BETAENC_VERSION "0.0.0"
#endif

struct be_string {
  std::string text;
};

struct be_trace {
  betaenc::EncoderTrace trace;
};

struct be_converter {
  betaenc::DigitTracker tracker;
};

struct be_distribution {
  betaenc::BetaProcess betas;
  betaenc::WordDistribution dist;
};

namespace {

thread_local std::string last_error;

be_status fail(be_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Maps exceptions thrown by the core onto status codes.
template <typename F>
be_status guard(F&& body) {
  try {
    last_error.clear();
    body();
    return BE_OK;
  } catch (const betaenc::ResourceError& e) {
    return fail(BE_ERR_RESOURCE, e.what());
  } catch (const betaenc::ParseError& e) {
    return fail(BE_ERR_PARSE, e.what());
  } catch (const betaenc::ConfigError& e) {
    return fail(BE_ERR_CONFIG, e.what());
  } catch (const betaenc::DomainError& e) {
    return fail(BE_ERR_DOMAIN, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(BE_ERR_PARSE, std::string("invalid JSON request: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(BE_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(BE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BE_ERR_INTERNAL, "unknown error");
  }
}

be_string* make_string(std::string text) { return new be_string{std::move(text)}; }

bool null_arg(const void* p, const char* name, be_status* status) {
  if (p != nullptr) return false;
  *status = fail(BE_ERR_NULL_ARGUMENT, std::string(name) + " is null");
  return true;
}

#define BE_REQUIRE(ptr)                               \
  do {                                                \
    be_status s_;                                     \
    if (null_arg((ptr), #ptr, &s_)) return s_;        \
  } while (0)

}  // namespace

extern "C" {

const char* be_version(void) { return BETAENC_VERSION; }

const char* be_prng_id(void) {
  static const std::string id(betaenc::Prng::kAlgorithm);
  return id.c_str();
}

const char* be_last_error(void) { return last_error.c_str(); }

const char* be_status_name(be_status status) {
  switch (status) {
    case BE_OK: return "ok";
    case BE_ERR_NULL_ARGUMENT: return "null-argument";
    case BE_ERR_DOMAIN: return "domain";
    case BE_ERR_CONFIG: return "config";
    case BE_ERR_PARSE: return "parse";
    case BE_ERR_RESOURCE: return "resource";
    case BE_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* be_string_data(const be_string* s) { return s ? s->text.c_str() : ""; }
size_t be_string_length(const be_string* s) { return s ? s->text.size() : 0; }
void be_string_free(be_string* s) { delete s; }

be_status be_run(const char* command, const char* request_json, be_string** response) {
  BE_REQUIRE(command);
  BE_REQUIRE(request_json);
  BE_REQUIRE(response);
  *response = nullptr;
  return guard([&] {
    const auto request = nlohmann::json::parse(request_json);
    *response = make_string(betaenc::commands::run(command, request));
  });
}

be_status be_encode(const char* x0, const char* beta, const char* u, size_t steps,
                    const char* precision, uint64_t seed, be_trace** out) {
  BE_REQUIRE(x0);
  BE_REQUIRE(beta);
  BE_REQUIRE(u);
  BE_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    const auto policy = betaenc::PrecisionPolicy::parse(precision ? precision : "exact");
    const auto x = policy.is_exact() ? betaenc::Rational::parse(x0) : betaenc::Rational::parse_decimal(x0);
    const auto betas = betaenc::parse_beta_process(beta, seed);
    const auto thresholds = betaenc::parse_threshold_process(u, betas.beta_max(), seed);
    *out = new be_trace{betaenc::encode(x, betas, thresholds, steps, policy, seed)};
  });
}

size_t be_trace_length(const be_trace* trace) { return trace ? trace->trace.size() : 0; }

size_t be_trace_bits(const be_trace* trace, uint8_t* out, size_t capacity) {
  if (!trace || !out) return 0;
  const size_t n = std::min(capacity, trace->trace.size());
  std::copy_n(trace->trace.bits.begin(), n, out);
  return n;
}

be_status be_trace_state(const be_trace* trace, size_t n, be_string** out) {
  BE_REQUIRE(trace);
  BE_REQUIRE(out);
  *out = nullptr;
  if (n < 1 || n > trace->trace.size()) return fail(BE_ERR_DOMAIN, "state index out of range");
  *out = make_string(trace->trace.states[n - 1].str());
  return BE_OK;
}

be_status be_trace_reconstruct(const be_trace* trace, size_t n, be_string** out) {
  BE_REQUIRE(trace);
  BE_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = make_string(betaenc::reconstruct_partial(trace->trace, n).str()); });
}

void be_trace_free(be_trace* trace) { delete trace; }

be_status be_converter_new(const char* beta, be_converter** out) {
  BE_REQUIRE(beta);
  BE_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = new be_converter{betaenc::DigitTracker(betaenc::Rational::parse(beta))}; });
}

be_status be_converter_push(be_converter* conv, int bit, size_t* emitted) {
  BE_REQUIRE(conv);
  if (bit != 0 && bit != 1) return fail(BE_ERR_DOMAIN, "bit must be 0 or 1");
  return guard([&] {
    const auto fresh = conv->tracker.push(static_cast<std::uint8_t>(bit));
    if (emitted) *emitted = fresh;
  });
}

size_t be_converter_k(const be_converter* conv) { return conv ? conv->tracker.k() : 0; }
size_t be_converter_confirmed(const be_converter* conv) { return conv ? conv->tracker.confirmed() : 0; }

size_t be_converter_digits(const be_converter* conv, uint8_t* out, size_t capacity) {
  if (!conv || !out) return 0;
  const auto& digits = conv->tracker.digits();
  const size_t n = std::min(capacity, digits.size());
  std::copy_n(digits.begin(), n, out);
  return n;
}

void be_converter_free(be_converter* conv) { delete conv; }

be_status be_k_of_m(const char* x, unsigned m, const char* beta, const char* u, uint64_t seed,
                    size_t* k, int* exceeded) {
  BE_REQUIRE(x);
  BE_REQUIRE(beta);
  BE_REQUIRE(u);
  BE_REQUIRE(k);
  return guard([&] {
    const auto b = betaenc::Rational::parse(beta);
    betaenc::require_beta(b);
    const auto thresholds = betaenc::parse_threshold_process(u, b, seed);
    const auto value = betaenc::k_of_m(betaenc::Rational::parse(x), m, b, thresholds, std::nullopt, seed);
    *k = value.k;
    if (exceeded) *exceeded = value.exceeded ? 1 : 0;
  });
}

be_status be_distribution_new(const char* beta, const char* u, unsigned m, int allow_general_thresholds,
                              be_distribution** out) {
  BE_REQUIRE(beta);
  BE_REQUIRE(u);
  BE_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    auto betas = betaenc::parse_beta_process(beta, 0);
    const auto thresholds = betaenc::parse_threshold_process(u, betas.beta_max(), 0);
    betaenc::EntropyOptions options;
    options.allow_general_thresholds = allow_general_thresholds != 0;
    auto dist = betaenc::word_distribution(betas, thresholds, m, options);
    *out = new be_distribution{std::move(betas), std::move(dist)};
  });
}

size_t be_distribution_support(const be_distribution* dist) {
  return dist ? dist->dist.entries().size() : 0;
}

be_status be_distribution_probability(const be_distribution* dist, const char* word, be_string** out) {
  BE_REQUIRE(dist);
  BE_REQUIRE(word);
  BE_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    const auto bits = betaenc::parse_bit_string(word);
    if (bits.size() != dist->dist.m()) throw betaenc::DomainError("word length differs from m");
    std::uint64_t packed = 0;
    for (auto b : bits) packed = (packed << 1) | b;
    *out = make_string(dist->dist.probability(packed).str());
  });
}

be_status be_distribution_max_probability(const be_distribution* dist, be_string** out) {
  BE_REQUIRE(dist);
  BE_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = make_string(dist->dist.max_probability().str()); });
}

be_status be_distribution_min_entropy(const be_distribution* dist, int digits, be_string** out) {
  BE_REQUIRE(dist);
  BE_REQUIRE(out);
  *out = nullptr;
  if (digits < 1 || digits > 1000) return fail(BE_ERR_DOMAIN, "digits must lie in [1, 1000]");
  return guard([&] { *out = make_string(dist->dist.min_entropy_decimal(digits)); });
}

be_status be_distribution_bound_holds(const be_distribution* dist, int* holds) {
  BE_REQUIRE(dist);
  BE_REQUIRE(holds);
  return guard([&] {
    const auto check =
        betaenc::min_entropy_bound_check(dist->dist, dist->betas.beta_min(), dist->betas.kappa());
    *holds = check.holds ? 1 : 0;
  });
}

void be_distribution_free(be_distribution* dist) { delete dist; }

be_status be_write_bit_file(const char* path, const uint8_t* bits, size_t count) {
  BE_REQUIRE(path);
  if (count > 0) BE_REQUIRE(bits);
  return guard([&] {
    std::vector<std::uint8_t> v(bits, bits + count);
    for (auto b : v) {
      if (b > 1) throw betaenc::DomainError("bits must be 0 or 1");
    }
    betaenc::write_bit_file(path, v);
  });
}

}  // extern "C"
