#ifndef TWISTRAM_H
#define TWISTRAM_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum TwStatus {
  TW_STATUS_OK = 0,
  TW_STATUS_NULL_POINTER = 1,
  TW_STATUS_INVALID_ARGUMENT = 2,
  // Input violates a mathematical precondition (even `t`, even `d`, bad `(p, q)`).
  TW_STATUS_HYPOTHESIS = 3,
  // The result was produced but the factorization or search budget ran out.
  TW_STATUS_BUDGET_EXHAUSTED = 4,
  TW_STATUS_OUT_OF_RANGE = 5,
  TW_STATUS_INTERNAL = 6,
  TW_STATUS_PANIC = 7,
} TwStatus;

// Opaque ramification certificate.
typedef struct TwCertificate TwCertificate;

// Opaque flip search result with localized witnesses.
typedef struct TwFlipSearch TwFlipSearch;

// Factorization limits; see [`tw_budget_default`].
typedef struct TwBudget {
  uint64_t trial_bound;
  uint64_t rho_iter_cap;
  uint64_t wall_ms;
  uint64_t seed;
} TwBudget;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

struct TwBudget tw_budget_default(void);

// Static, NUL-terminated description of `status`. Never free it.
const char *tw_status_message(enum TwStatus status);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void tw_string_free(char *s);

// Signed norm `N_d` as a decimal string.
//
// # Safety
// `out` must be valid for writes.
enum TwStatus tw_norm_real(uint64_t t, uint64_t d, char **out);

// Sign of `s_n` (`1` or `-1`) for odd `n`.
//
// # Safety
// `out` must be valid for writes.
enum TwStatus tw_s_sign(uint64_t t, uint64_t n, int8_t *out);

// Certify the `(d, 0)` surgery on `K_t`. A null `budget` means the default.
// On `TW_STATUS_BUDGET_EXHAUSTED` the handle is still written.
//
// # Safety
// `budget` must be null or readable; `out` must be valid for writes.
enum TwStatus tw_certify(uint64_t t,
                         uint64_t d,
                         const struct TwBudget *budget,
                         struct TwCertificate **out);

// # Safety
// `cert` must be a live handle.
bool tw_certificate_is_complete(const struct TwCertificate *cert);

// # Safety
// `cert` must be null or a live handle.
size_t tw_certificate_ramified_count(const struct TwCertificate *cert);

// Decimal string of the `index`-th certified prime, ascending.
//
// # Safety
// `cert` must be a live handle; `out` must be valid for writes.
enum TwStatus tw_certificate_ramified_prime(const struct TwCertificate *cert,
                                            size_t index,
                                            char **out);

// # Safety
// `cert` must be a live handle; `out` must be valid for writes.
enum TwStatus tw_certificate_to_json(const struct TwCertificate *cert, char **out);

// # Safety
// `cert` must be null or a handle from [`tw_certify`], not yet freed.
void tw_certificate_free(struct TwCertificate *cert);

// Walk `n = p^u q^v` for sign flips of `s_n` and localize each witness,
// computing exact norms only below `digit_cap` digits. On
// `TW_STATUS_BUDGET_EXHAUSTED` the handle is still written.
//
// # Safety
// `out` must be valid for writes.
enum TwStatus tw_flip_search(uint64_t t,
                             uint64_t p,
                             uint64_t q,
                             size_t max_flips,
                             uint32_t exponent_cap,
                             uint64_t digit_cap,
                             struct TwFlipSearch **out);

// # Safety
// `search` must be null or a live handle.
size_t tw_flip_search_witness_count(const struct TwFlipSearch *search);

// Endpoints of the `index`-th witness.
//
// # Safety
// `search` must be a live handle; `n_prev` and `n_next` valid for writes.
enum TwStatus tw_flip_search_witness(const struct TwFlipSearch *search,
                                     size_t index,
                                     uint64_t *n_prev,
                                     uint64_t *n_next);

// # Safety
// `search` must be a live handle; `out` must be valid for writes.
enum TwStatus tw_flip_search_to_json(const struct TwFlipSearch *search, char **out);

// # Safety
// `search` must be null or a handle from [`tw_flip_search`], not yet freed.
void tw_flip_search_free(struct TwFlipSearch *search);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWISTRAM_H */
