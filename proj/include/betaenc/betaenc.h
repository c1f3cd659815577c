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

/* C interface to the betaenc library. All functions return a be_status;
 * on failure be_last_error() describes the problem (thread-local, valid
 * until the next call on the same thread). Handles are opaque and owned by
 * the caller, who releases them with the matching *_free function. Rational
 * arguments use the "p/q" literal syntax. */

#ifndef BETAENC_BETAENC_H_
#define BETAENC_BETAENC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(BETAENC_BUILDING)
#define BETAENC_API __declspec(dllexport)
#else
#define BETAENC_API __declspec(dllimport)
#endif
#else
#define BETAENC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum be_status {
  BE_OK = 0,
  BE_ERR_NULL_ARGUMENT = 1,
  BE_ERR_DOMAIN = 2,   /* argument outside the mathematical domain */
  BE_ERR_CONFIG = 3,   /* invalid configuration or request */
  BE_ERR_PARSE = 4,    /* malformed literal, bit string or file */
  BE_ERR_RESOURCE = 5, /* enumeration or memory budget exceeded */
  BE_ERR_INTERNAL = 6
} be_status;

typedef struct be_string be_string;
typedef struct be_trace be_trace;
typedef struct be_converter be_converter;
typedef struct be_distribution be_distribution;

BETAENC_API const char* be_version(void);
BETAENC_API const char* be_prng_id(void);
BETAENC_API const char* be_last_error(void);
BETAENC_API const char* be_status_name(be_status status);

/* Owned strings. */
BETAENC_API const char* be_string_data(const be_string* s);
BETAENC_API size_t be_string_length(const be_string* s);
BETAENC_API void be_string_free(be_string* s);

/* Runs a subcommand (encode, convert, lochs, entropy, extract, battery) on
 * a JSON request object and returns the formatted result. */
BETAENC_API be_status be_run(const char* command, const char* request_json, be_string** response);

/* Encoder traces. beta and u use the process grammar of the CLI
 * (e.g. "3/2", "iid:3/2,8/5;1/2,1/2", "seeded:1,2"); precision is "exact" or
 * "float:<bits>". */
BETAENC_API be_status be_encode(const char* x0, const char* beta, const char* u, size_t steps,
                                const char* precision, uint64_t seed, be_trace** out);
BETAENC_API size_t be_trace_length(const be_trace* trace);
/* Copies min(length, capacity) bits (0/1 bytes) into out. */
BETAENC_API size_t be_trace_bits(const be_trace* trace, uint8_t* out, size_t capacity);
/* State x_n for 1 <= n <= length, as "p/q". */
BETAENC_API be_status be_trace_state(const be_trace* trace, size_t n, be_string** out);
BETAENC_API be_status be_trace_reconstruct(const be_trace* trace, size_t n, be_string** out);
BETAENC_API void be_trace_free(be_trace* trace);

/* Streaming beta-to-binary conversion for a fixed beta. */
BETAENC_API be_status be_converter_new(const char* beta, be_converter** out);
/* Pushes one encoder bit; *emitted receives the number of new binary digits. */
BETAENC_API be_status be_converter_push(be_converter* conv, int bit, size_t* emitted);
BETAENC_API size_t be_converter_k(const be_converter* conv);
BETAENC_API size_t be_converter_confirmed(const be_converter* conv);
BETAENC_API size_t be_converter_digits(const be_converter* conv, uint8_t* out, size_t capacity);
BETAENC_API void be_converter_free(be_converter* conv);

/* k(m, u, x) for a fixed beta; *exceeded is set when the default cap was hit. */
BETAENC_API be_status be_k_of_m(const char* x, unsigned m, const char* beta, const char* u,
                                uint64_t seed, size_t* k, int* exceeded);

/* Exact distribution of the first m encoder bits for x ~ U[0,1]. */
BETAENC_API be_status be_distribution_new(const char* beta, const char* u, unsigned m,
                                          int allow_general_thresholds, be_distribution** out);
BETAENC_API size_t be_distribution_support(const be_distribution* dist);
BETAENC_API be_status be_distribution_probability(const be_distribution* dist, const char* word,
                                                  be_string** out);
BETAENC_API be_status be_distribution_max_probability(const be_distribution* dist, be_string** out);
BETAENC_API be_status be_distribution_min_entropy(const be_distribution* dist, int digits,
                                                  be_string** out);
/* *holds = 1 iff max probability <= kappa / beta_min^m. */
BETAENC_API be_status be_distribution_bound_holds(const be_distribution* dist, int* holds);
BETAENC_API void be_distribution_free(be_distribution* dist);

/* Bit files: 8-byte little-endian bit count, then packed MSB-first bytes. */
BETAENC_API be_status be_write_bit_file(const char* path, const uint8_t* bits, size_t count);

#ifdef __cplusplus
}
#endif

#endif /* BETAENC_BETAENC_H_ */
