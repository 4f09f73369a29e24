#ifndef NCUR_H
#define NCUR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NcurStatus {
  NCUR_STATUS_OK = 0,
  NCUR_STATUS_NULL_POINTER = 1,
  NCUR_STATUS_INVALID_UTF8 = 2,
  NCUR_STATUS_UNKNOWN_THEORY = 3,
  NCUR_STATUS_INVALID_ARGUMENT = 4,
  NCUR_STATUS_PARSE = 5,
  NCUR_STATUS_STATE_OUTSIDE_THEORY = 6,
  NCUR_STATUS_MEASUREMENT_UNAVAILABLE = 7,
  NCUR_STATUS_INFEASIBLE = 8,
  NCUR_STATUS_UNSUPPORTED = 9,
  NCUR_STATUS_INTERNAL = 10,
  NCUR_STATUS_PANIC = 11,
} NcurStatus;

/**
 * Opaque theory handle.
 */
typedef struct NcurTheory NcurTheory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a theory by name: `qubit`, `stabilizer`, `depolarized:p/q`,
 * `gbit` or `simplicial`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NcurStatus ncur_theory_new(const char *name, struct NcurTheory **out);

/**
 * Builds a theory from its JSON serialization.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NcurStatus ncur_theory_from_json(const char *json, struct NcurTheory **out);

/**
 * Releases a theory. Null is ignored.
 *
 * # Safety
 * `theory` must come from this library and not be used afterwards.
 */
void ncur_theory_free(struct NcurTheory *theory);

/**
 * # Safety
 * `theory` must be a live handle and `out` a valid pointer.
 */
enum NcurStatus ncur_theory_json(const struct NcurTheory *theory_ptr, char **out);

/**
 * Whether `state` (`"sx,sy,sz"` rationals) lies in the theory's state space.
 *
 * # Safety
 * Pointers must be valid; `state` NUL-terminated.
 */
enum NcurStatus ncur_theory_contains(const struct NcurTheory *theory_ptr,
                                     const char *state,
                                     bool *out);

/**
 * Support of the body projected onto `axes` (`"xz"` or `"xyz"`) in
 * `direction`, as surd JSON `{"a","b","k"}`.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum NcurStatus ncur_support(const struct NcurTheory *theory_ptr,
                             const char *axes,
                             const char *direction,
                             char **out);

/**
 * Orbit realizability of `state` under `group` (`"a12"` or `"a13"`), as
 * witness or refutation JSON. `geometric` nonzero allows A₁³ questions
 * without a Y measurement.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum NcurStatus ncur_orbit_check(const struct NcurTheory *theory_ptr,
                                 const char *state,
                                 const char *group,
                                 int32_t geometric,
                                 char **out);

/**
 * Violation report JSON for the theory under `group`.
 *
 * # Safety
 * Pointers must be valid; `group` NUL-terminated.
 */
enum NcurStatus ncur_violation_report(const struct NcurTheory *theory_ptr,
                                      const char *group,
                                      char **out);

/**
 * Noncontextual bound report JSON for `n` measurements via `route`
 * (`"lp"`, `"fm"` or `"appendixb"`).
 *
 * # Safety
 * `route` must be NUL-terminated and `out` valid.
 */
enum NcurStatus ncur_nc_bound(uint32_t n, const char *route, char **out);

/**
 * The all-theories report. `eta` may be null for the default.
 *
 * # Safety
 * `eta` must be null or NUL-terminated; `out` valid.
 */
enum NcurStatus ncur_report(const char *eta, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ncur_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library on the same thread.
 */
const char *ncur_last_error(void);

const char *ncur_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NCUR_H */
