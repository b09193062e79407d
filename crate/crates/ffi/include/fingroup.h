#ifndef FINGROUP_H
#define FINGROUP_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum FgtStatus {
  FGT_STATUS_OK = 0,
  FGT_STATUS_NULL_POINTER = 1,
  FGT_STATUS_INVALID_UTF8 = 2,
  FGT_STATUS_PARSE = 3,
  FGT_STATUS_INVALID_GROUP = 4,
  FGT_STATUS_CAP_EXCEEDED = 5,
  FGT_STATUS_NOT_FOUND = 6,
  FGT_STATUS_CONFIG = 7,
  FGT_STATUS_IO = 8,
  FGT_STATUS_PANIC = 9,
} FgtStatus;

/**
 * Opaque group handle.
 */
typedef struct FgtGroup FgtGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a group from an expression such as `S(4)` or `D(8)xC(3)`.
 *
 * # Safety
 * `expr` must be a nul-terminated string and `out` a valid pointer.
 */
enum FgtStatus fgt_group_from_expr(const char *expr, struct FgtGroup **out);

/**
 * Builds a group from a row-major multiplication table of `order * order`
 * entries. Element 0 must be the identity.
 *
 * # Safety
 * `table` must point to `order * order` readable values and `out` must be
 * a valid pointer.
 */
enum FgtStatus fgt_group_from_table(size_t order, const int64_t *table, struct FgtGroup **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void fgt_group_free(struct FgtGroup *g);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum FgtStatus fgt_group_order(const struct FgtGroup *g, size_t *out);

/**
 * Number of subgroups.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum FgtStatus fgt_group_subgroup_count(const struct FgtGroup *g, size_t *out);

/**
 * Lattice index of the subgroup generated by `gens` (cycles, labels or
 * element indices separated by commas).
 *
 * # Safety
 * `g` must be a live handle, `gens` a nul-terminated string and `out` a
 * valid pointer.
 */
enum FgtStatus fgt_group_find_subgroup(const struct FgtGroup *g, const char *gens, size_t *out);

/**
 * Evaluates the embedding property `kind` for the subgroup at lattice
 * index `index`. `formation` may be null, meaning `U`. When `json` is
 * not null it receives the verdict as a JSON string.
 *
 * # Safety
 * `g` must be a live handle, `kind` a nul-terminated string, `formation`
 * null or nul-terminated, `holds` valid and `json` null or valid.
 */
enum FgtStatus fgt_check(const struct FgtGroup *g,
                         size_t index,
                         const char *kind,
                         const char *formation,
                         bool *holds,
                         char **json);

/**
 * Structural summary of the group as JSON.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum FgtStatus fgt_group_analyze_json(const struct FgtGroup *g, char **out);

/**
 * Runs the suites named by `selector` (an id, a prefix or `all`) over the
 * corpus of groups up to `max_order` and returns the reports as a JSON
 * array. `violations` receives the total number of violations.
 *
 * # Safety
 * `selector` must be nul-terminated; `out` and `violations` must be valid.
 */
enum FgtStatus fgt_verify_json(const char *selector,
                               size_t max_order,
                               size_t *violations,
                               char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void fgt_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *fgt_last_error(void);

/**
 * Library version, a static string.
 */
const char *fgt_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FINGROUP_H */
