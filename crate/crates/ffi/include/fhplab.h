#ifndef FHPLAB_H
#define FHPLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every entry point.
typedef enum FhpStatus {
  FHP_STATUS_OK = 0,
  FHP_STATUS_NULL_POINTER = 1,
  FHP_STATUS_INVALID_ARGUMENT = 2,
  FHP_STATUS_PARSE = 3,
  FHP_STATUS_CAP = 4,
  FHP_STATUS_OVERFLOW = 5,
  FHP_STATUS_PANIC = 6,
} FhpStatus;

// Opaque handle to a set family.
typedef struct FhpFamily FhpFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *fhp_last_error(void);

// Library version as a static NUL-terminated string.
const char *fhp_version(void);

// Parses a family file (`{"ground": n, "sets": [[..], ..]}`).
//
// # Safety
// `json` must be NUL-terminated; `out` must be writable.
enum FhpStatus fhp_family_from_json(const char *json, struct FhpFamily **out);

// Builds a family from concatenated member lists: member i holds
// `lengths[i]` consecutive entries of `elements`.
//
// # Safety
// `elements` must hold the sum of `lengths` entries and `lengths` must hold
// `members` entries; either may be null when empty.
enum FhpStatus fhp_family_from_lists(size_t ground,
                                     const size_t *elements,
                                     const size_t *lengths,
                                     size_t members,
                                     struct FhpFamily **out);

// The grid family S_{i,j} = {f : f(i) = j} over functions [k] -> [m].
//
// # Safety
// `out` must be writable.
enum FhpStatus fhp_family_tp2_grid(size_t k, size_t m, struct FhpFamily **out);

// Releases a family; null is ignored.
//
// # Safety
// `f` must come from this library and not be used afterwards.
void fhp_family_free(struct FhpFamily *f);

// Number of members and ground-set size.
//
// # Safety
// Pointers must be valid; `members` and `ground` must be writable.
enum FhpStatus fhp_family_shape(const struct FhpFamily *f, size_t *members, size_t *ground);

// Number of k-element index subsets with a common point, and C(n, k).
//
// # Safety
// Pointers must be valid; `count` and `total` must be writable.
enum FhpStatus fhp_cons_k(const struct FhpFamily *f, size_t k, uint64_t *count, uint64_t *total);

// Largest number of members sharing a point, and the family size.
//
// # Safety
// Pointers must be valid; `depth` and `members` must be writable.
enum FhpStatus fhp_max_depth(const struct FhpFamily *f, size_t *depth, size_t *members);

// FHP report for (k, alpha) as JSON; `alpha` is a rational such as "1/2".
//
// # Safety
// Pointers must be valid; release `*out_json` with `fhp_string_free`.
enum FhpStatus fhp_check_fhp_json(const struct FhpFamily *f,
                                  size_t k,
                                  const char *alpha,
                                  char **out_json);

// Intersection number and fractional transversal as JSON.
//
// # Safety
// Pointers must be valid; release `*out_json` with `fhp_string_free`.
enum FhpStatus fhp_lp_json(const struct FhpFamily *f, size_t transversal_cap, char **out_json);

// The family in the family-file JSON format.
//
// # Safety
// Pointers must be valid; release `*out_json` with `fhp_string_free`.
enum FhpStatus fhp_family_to_json(const struct FhpFamily *f, char **out_json);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void fhp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FHPLAB_H */
