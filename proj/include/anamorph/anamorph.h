// Copyright 2026 The anamorph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the anamorph library. All handles are opaque and owned by the
 * caller; release them with the matching *_free function. Strings returned
 * through char** out-parameters are NUL-terminated JSON documents and must be
 * released with anamorph_string_free. Every function returns ANAMORPH_OK or an
 * error status; the message of the last error on the calling thread is
 * available from anamorph_last_error(). Out-parameters are left untouched on
 * failure. */

#ifndef ANAMORPH_ANAMORPH_H
#define ANAMORPH_ANAMORPH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(ANAMORPH_BUILDING_LIBRARY)
#define ANAMORPH_API __declspec(dllexport)
#else
#define ANAMORPH_API __declspec(dllimport)
#endif
#else
#define ANAMORPH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum anamorph_status {
    ANAMORPH_OK = 0,
    ANAMORPH_E_INVALID_ARGUMENT = 1,
    ANAMORPH_E_SCHEMA_VIOLATION = 2,
    ANAMORPH_E_DIMENSION_MISMATCH = 3,
    ANAMORPH_E_NOT_HERMITIAN = 4,
    ANAMORPH_E_NOT_DENSITY = 5,
    ANAMORPH_E_NOT_STRICTLY_POSITIVE = 6,
    ANAMORPH_E_NO_CONVERGENCE = 7,
    ANAMORPH_E_NEGATIVE_EIGENVALUE_FOR_SQRT = 8,
    ANAMORPH_E_TOO_LARGE = 9,
    ANAMORPH_E_LAMBDA_OUT_OF_RANGE = 10,
    ANAMORPH_E_ETA_INFEASIBLE = 11,
    ANAMORPH_E_ETA_TOO_SMALL_FOR_DILATION = 12,
    ANAMORPH_E_NO_COVERT_SIGNAL = 13,
    ANAMORPH_E_UNSUPPORTED_DESIGN = 14,
    ANAMORPH_E_EMPTY_BRANCH = 15,
    ANAMORPH_E_NO_SHOTS_IN_BRANCH = 16,
    ANAMORPH_E_TOO_LARGE_FOR_BRUTE_FORCE = 17,
    ANAMORPH_E_UNSUPPORTED_DIMS = 18,
    ANAMORPH_E_FIELD_TOO_SMALL = 19,
    ANAMORPH_E_DUPLICATE_POINTS = 20,
    ANAMORPH_E_THRESHOLD_UNMET = 21,
    ANAMORPH_E_INVALID_PAIR = 22,
    ANAMORPH_E_COVERT_UNAVAILABLE = 23,
    ANAMORPH_E_INCONSISTENT_SHARES = 24,
    ANAMORPH_E_NULL_POINTER = 100,
    ANAMORPH_E_IO = 101,
    ANAMORPH_E_INTERNAL = 102
} anamorph_status;

typedef enum anamorph_eta_mode { ANAMORPH_ETA_STRICT = 0, ANAMORPH_ETA_WEAK = 1 } anamorph_eta_mode;
typedef enum anamorph_route { ANAMORPH_ROUTE_DIRECT = 0, ANAMORPH_ROUTE_DILATION = 1 } anamorph_route;

typedef struct anamorph_state anamorph_state;           /* density matrix */
typedef struct anamorph_key anamorph_key;               /* anamorphic key */
typedef struct anamorph_ciphertext anamorph_ciphertext; /* ciphertext state */

ANAMORPH_API const char *anamorph_version(void);
/* Symbolic name such as "EtaInfeasible"; "Ok" for ANAMORPH_OK. Never NULL. */
ANAMORPH_API const char *anamorph_status_name(anamorph_status status);
/* Message of the last failed call on this thread; empty if none. */
ANAMORPH_API const char *anamorph_last_error(void);
ANAMORPH_API void anamorph_string_free(char *s);
/* Re-emits any JSON document in the library's canonical layout (sorted keys, reals at 17
 * significant digits). */
ANAMORPH_API anamorph_status anamorph_json_canonical(const char *json, char **out);

/* States. Matrices are row-major with interleaved (re, im) pairs. */
ANAMORPH_API anamorph_status anamorph_state_from_json(const char *json, anamorph_state **out);
ANAMORPH_API anamorph_status anamorph_state_from_array(size_t dim, const double *re_im, anamorph_state **out);
ANAMORPH_API anamorph_status anamorph_state_to_json(const anamorph_state *s, char **out);
ANAMORPH_API anamorph_status anamorph_state_dim(const anamorph_state *s, size_t *dim);
ANAMORPH_API anamorph_status anamorph_state_entry(const anamorph_state *s, size_t row, size_t col, double *re,
                                                  double *im);
/* Largest entrywise modulus of a - b. */
ANAMORPH_API anamorph_status anamorph_state_max_abs_diff(const anamorph_state *a, const anamorph_state *b,
                                                         double *out);
ANAMORPH_API void anamorph_state_free(anamorph_state *s);

/* Keys. keygen draws k, then k', then the permutation from the substream (seed, "keygen", 0). */
ANAMORPH_API anamorph_status anamorph_keygen(const anamorph_state *mo, const anamorph_state *mc,
                                             unsigned security_bits, anamorph_eta_mode mode, uint64_t seed,
                                             anamorph_key **out);
ANAMORPH_API anamorph_status anamorph_key_from_json(const char *json, anamorph_key **out);
ANAMORPH_API anamorph_status anamorph_key_to_json(const anamorph_key *k, char **out);
ANAMORPH_API anamorph_status anamorph_key_eta(const anamorph_key *k, uint64_t *eta);
ANAMORPH_API void anamorph_key_free(anamorph_key *k);

/* Ciphertexts. */
ANAMORPH_API anamorph_status anamorph_ciphertext_from_json(const char *json, anamorph_ciphertext **out);
ANAMORPH_API anamorph_status anamorph_ciphertext_to_json(const anamorph_ciphertext *c, char **out);
ANAMORPH_API anamorph_status anamorph_ciphertext_state(const anamorph_ciphertext *c, anamorph_state **out);
ANAMORPH_API void anamorph_ciphertext_free(anamorph_ciphertext *c);

ANAMORPH_API anamorph_status anamorph_encrypt(const anamorph_state *mo, const anamorph_state *mc,
                                              const anamorph_key *key, anamorph_route route,
                                              anamorph_ciphertext **out);
ANAMORPH_API anamorph_status anamorph_encrypt_original(const anamorph_state *mo, const anamorph_key *key,
                                                       anamorph_ciphertext **out);
ANAMORPH_API anamorph_status anamorph_dom(const anamorph_ciphertext *ct, const anamorph_key *key,
                                          anamorph_state **out);
ANAMORPH_API anamorph_status anamorph_dcm_exact(const anamorph_ciphertext *ct, const anamorph_key *key,
                                                anamorph_state **out);
ANAMORPH_API anamorph_status anamorph_eoc(const anamorph_ciphertext *ct, const anamorph_key *key,
                                          anamorph_ciphertext **out);

/* Finite-shot covert decryption. Trial t draws from the substream (seed, "dcm", t).
 * design is "frames_d2" or "singleton". The report lists the plan and per-trial
 * errors; *mc_hat receives the estimate of trial 0 (may be NULL). When
 * shots_csv_path is not NULL every shot is written there. */
ANAMORPH_API anamorph_status anamorph_dcm_sampled(const anamorph_ciphertext *ct, const anamorph_key *key,
                                                  double epsilon, double delta, const char *design,
                                                  uint64_t seed, uint64_t trials, const char *shots_csv_path,
                                                  char **report_json, anamorph_state **mc_hat);

/* Reports, returned as JSON. */
ANAMORPH_API anamorph_status anamorph_analyze(const anamorph_ciphertext *ct0, const anamorph_ciphertext *ct1,
                                              uint64_t eta, char **report_json);
/* Entropy quantities of the encoded messages under `key`. */
ANAMORPH_API anamorph_status anamorph_entropy(const anamorph_state *mo, const anamorph_state *mc,
                                              const anamorph_key *key, char **report_json);
/* Twirl of the key-averaged block state; adds "max_deviation" when brute_force != 0. */
ANAMORPH_API anamorph_status anamorph_twirl_check(unsigned d1, unsigned d2, uint64_t eta, int brute_force,
                                                  char **report_json);
/* Exact average over all coins; adds "input_independence" against the reference pair
 * (I/2, |0><0|) when d1 = d2 = 1. */
ANAMORPH_API anamorph_status anamorph_qcpa_check(const anamorph_state *mo, const anamorph_state *mc,
                                                 uint64_t eta, char **report_json);
ANAMORPH_API anamorph_status anamorph_tpds(const anamorph_ciphertext *ct, const anamorph_key *key,
                                           char **report_json);

/* Secret sharing. eta_domain_json is {"values": [...]}. The share document holds
 * "bundles", "encoded", "dictator_view", "eta_domain" and "share_size". Randomness comes from
 * the substream (seed, "qass", 0). */
ANAMORPH_API anamorph_status anamorph_qass_share(const anamorph_state *mo, const anamorph_state *mc,
                                                 const char *eta_domain_json, unsigned security_bits,
                                                 uint64_t seed, char **share_json);
/* Reconstructs from the bundles of players i and j (1-based) in a share document.
 * original_only != 0 uses k1..k3 and omits the covert message. */
ANAMORPH_API anamorph_status anamorph_qass_reconstruct(const char *share_json, unsigned player_i, unsigned player_j,
                                                       int original_only, char **report_json,
                                                       anamorph_state **mo_rec, anamorph_state **mc_rec);
ANAMORPH_API anamorph_status anamorph_cheat_sim(unsigned d1, unsigned d2, size_t eta_domain_size, uint64_t trials,
                                                uint64_t seed, char **report_json);

#ifdef __cplusplus
}
#endif

#endif /* ANAMORPH_ANAMORPH_H */
