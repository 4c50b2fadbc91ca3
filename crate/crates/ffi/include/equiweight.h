#ifndef EQUIWEIGHT_H
#define EQUIWEIGHT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. `EW_STATUS_OK` is zero; everything else is an error.
 */
enum EwStatus {
  EW_STATUS_OK = 0,
  EW_STATUS_NULL_POINTER = 1,
  EW_STATUS_INVALID_UTF8 = 2,
  EW_STATUS_IO = 3,
  EW_STATUS_PARSE = 4,
  EW_STATUS_INVALID_MODEL = 5,
  EW_STATUS_WINDOW_TOO_SMALL = 6,
  EW_STATUS_UNSUPPORTED = 7,
  EW_STATUS_MISSING_COMPANION = 8,
  EW_STATUS_SMITH_VIOLATION = 9,
  EW_STATUS_INTERNAL = 10,
};
typedef int32_t EwStatus;

/**
 * Opaque model handle.
 */
typedef struct EwModel EwModel;

/**
 * Message of the last failing call on this thread; empty if none. Owned by the library.
 */
const char *ew_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ew_version(void);

/**
 * Parses a model from JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
EwStatus ew_model_from_json(const char *json, struct EwModel **out);

/**
 * Loads a model file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
EwStatus ew_model_from_path(const char *path, struct EwModel **out);

/**
 * Loads an embedded corpus entry by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
EwStatus ew_model_from_corpus(const char *name, struct EwModel **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `m` must come from an `ew_model_from_*` call and not be freed twice.
 */
void ew_model_free(struct EwModel *m);

/**
 * Real dimension of the model.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
EwStatus ew_model_dimension(const struct EwModel *m, int64_t *out);

/**
 * Order of the acting group.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
EwStatus ew_model_group_order(const struct EwModel *m, uint64_t *out);

/**
 * `dim H_k(X; G)` over the model's default window.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
EwStatus ew_equivariant_homology_dim(const struct EwModel *m, int64_t k, uint64_t *out);

/**
 * `B_k^G` through the row spectral sequences.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
EwStatus ew_bkg(const struct EwModel *m, int64_t k, int64_t *out);

/**
 * `^qB_i` from row `q`.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
EwStatus ew_qb(const struct EwModel *m, int64_t q, int64_t i, int64_t *out);

/**
 * `B'_k` from the invariant data.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
EwStatus ew_b_prime(const struct EwModel *m, int64_t k, int64_t *out);

/**
 * Smith exactness over every filtration degree. On failure `*exact` is false and the first
 * failing filtration degree and chain degree are written to `alpha` and `degree`.
 *
 * # Safety
 * `m` must be a live handle; the output pointers must be valid.
 */
EwStatus ew_smith_check(const struct EwModel *m, bool *exact, int64_t *alpha, int64_t *degree);

/**
 * Evaluates every expected block of the embedded corpus.
 *
 * # Safety
 * The output pointers must be valid.
 */
EwStatus ew_verify_corpus(uint64_t *total, uint64_t *failed);

#endif  /* EQUIWEIGHT_H */
