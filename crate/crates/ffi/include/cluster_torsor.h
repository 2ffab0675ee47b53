#ifndef CLUSTER_TORSOR_H
#define CLUSTER_TORSOR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CtStatus {
  CT_STATUS_OK = 0,
  CT_STATUS_VERIFICATION_FAILED = 1,
  CT_STATUS_INVALID_INPUT = 2,
  CT_STATUS_NULL_POINTER = 3,
  CT_STATUS_PANIC = 4,
} CtStatus;

/**
 * Opaque seed handle.
 */
typedef struct CtSeed CtSeed;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or NULL. The pointer
 * stays valid until the next failing call on this thread.
 */
const char *ct_last_error(void);

/**
 * Parses a seed from its JSON description.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum CtStatus ct_seed_from_json(const char *json, struct CtSeed **out);

/**
 * Releases a seed handle. NULL is ignored.
 *
 * # Safety
 * `seed` must come from this library and not be used afterwards.
 */
void ct_seed_free(struct CtSeed *seed);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ct_string_free(char *s);

/**
 * Writes the seed as JSON.
 *
 * # Safety
 * `seed` must be a live handle; `out` must be writable.
 */
enum CtStatus ct_seed_to_json(const struct CtSeed *seed, char **out);

/**
 * Checks the seed axioms; the list of violations is written to `out`.
 * Returns `VerificationFailed` when there is at least one.
 *
 * # Safety
 * `seed` must be a live handle; `out` must be writable.
 */
enum CtStatus ct_seed_validate(const struct CtSeed *seed, char **out);

/**
 * Mutates along `path` (index labels) and returns a new handle.
 *
 * # Safety
 * `seed` must be a live handle; `path` must hold `len` entries; `out` must
 * be writable.
 */
enum CtStatus ct_seed_mutate(const struct CtSeed *seed,
                             const size_t *path,
                             size_t len,
                             struct CtSeed **out);

/**
 * The Picard group of the partially compactified `X`-space, e.g. `"Z/2"`.
 *
 * # Safety
 * `seed` must be a live handle; `out` must be writable.
 */
enum CtStatus ct_picard_group(const struct CtSeed *seed, char **out);

/**
 * Randomized torsor identity checks at the default fiber point; writes the
 * JSON report.
 *
 * # Safety
 * `seed` must be a live handle; `out` must be writable.
 */
enum CtStatus ct_verify_utor(const struct CtSeed *seed,
                             size_t trials,
                             uint64_t rng_seed,
                             char **out);

/**
 * The theta function of the principal exponent `q`, rendered as text.
 *
 * # Safety
 * `seed` must be a live handle; `q` must hold `len` entries; `out` must be
 * writable.
 */
enum CtStatus ct_theta(const struct CtSeed *seed,
                       const int64_t *q,
                       size_t len,
                       uint32_t order,
                       char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLUSTER_TORSOR_H */
