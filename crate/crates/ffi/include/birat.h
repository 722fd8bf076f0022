/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef BIRAT_H
#define BIRAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes of every fallible call.
 */
typedef enum BiratStatus {
  BIRAT_STATUS_OK = 0,
  BIRAT_STATUS_NULL_POINTER = 1,
  BIRAT_STATUS_INVALID_UTF8 = 2,
  BIRAT_STATUS_UNKNOWN_INSTANCE = 3,
  BIRAT_STATUS_INVALID_INSTANCE = 4,
  BIRAT_STATUS_COMPUTATION = 5,
  /*
   The exact engine hit its term ceiling; partial results were written.
   */
  BIRAT_STATUS_TRUNCATED = 6,
  BIRAT_STATUS_BUFFER_TOO_SMALL = 7,
  BIRAT_STATUS_UNAVAILABLE = 8,
  BIRAT_STATUS_PANIC = 9,
} BiratStatus;

/*
 Opaque handle to a loaded instance.
 */
typedef struct BiratInstance BiratInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Loads a built-in instance (`khk-euler`, `dp1-ercolani`, `inflated-qrt`) or an
 instance file path. `params` is NULL or a comma separated list such as
 `"gamma=1,a=2"`.

 # Safety
 `spec` must be a NUL-terminated string, `params` NULL or NUL-terminated, and
 `out` a valid pointer.
 */
enum BiratStatus birat_instance_load(const char *spec,
                                     const char *params,
                                     struct BiratInstance **out);

/*
 Parses an instance document held in memory.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BiratStatus birat_instance_from_json(const char *json, struct BiratInstance **out);

/*
 Releases an instance; NULL is ignored.

 # Safety
 `inst` must come from a load call and not be used afterwards.
 */
void birat_instance_free(struct BiratInstance *inst);

/*
 Number of blow-up charts, i.e. index columns in orbit tables.

 # Safety
 `inst` must be NULL or a live handle.
 */
size_t birat_chart_count(const struct BiratInstance *inst);

/*
 Default horizon of the instance.

 # Safety
 `inst` must be NULL or a live handle.
 */
size_t birat_default_nmax(const struct BiratInstance *inst);

/*
 Degrees `d(0..=nmax)` of the orbit of the instance seed from the exact engine.
 Writes at most `len` values and the count written to `written`; returns
 `Truncated` when the term ceiling stopped the run early.

 # Safety
 `out` must point to `len` writable values and `written` be valid.
 */
enum BiratStatus birat_degrees(const struct BiratInstance *inst,
                               size_t nmax,
                               uint64_t *out,
                               size_t len,
                               size_t *written);

/*
 Degrees `d(0..=nmax)` from the affine index recursion, if the instance has one.

 # Safety
 `out` must point to `len` writable values.
 */
enum BiratStatus birat_affine_degrees(const struct BiratInstance *inst,
                                      size_t nmax,
                                      int64_t *out,
                                      size_t len);

/*
 Orbit table as CSV with header `n,d,<chart names>`.

 # Safety
 `out` must be valid; release the string with `birat_string_free`.
 */
enum BiratStatus birat_orbit_csv(const struct BiratInstance *inst, size_t nmax, char **out);

/*
 Orbit table as JSON.

 # Safety
 `out` must be valid; release the string with `birat_string_free`.
 */
enum BiratStatus birat_orbit_json(const struct BiratInstance *inst, size_t nmax, char **out);

/*
 Minimal recurrence of the exact degree sequence, with characteristic
 polynomial and closed form, as JSON.

 # Safety
 `out` must be valid; release the string with `birat_string_free`.
 */
enum BiratStatus birat_recurrence_json(const struct BiratInstance *inst, size_t nmax, char **out);

/*
 Polynomials of `degree` meeting the instance's index bounds (all of them when
 `bounded` is false) and the pull-back action on them, as JSON.

 # Safety
 `out` must be valid; release the string with `birat_string_free`.
 */
enum BiratStatus birat_darboux_json(const struct BiratInstance *inst,
                                    uint32_t degree,
                                    bool bounded,
                                    char **out);

/*
 Releases a string returned by the library; NULL is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void birat_string_free(char *s);

/*
 Message of the last failed call on this thread, empty after a success.
 Valid until the next call into the library on the same thread.
 */
const char *birat_last_error_message(void);

/*
 Library version, a static string.
 */
const char *birat_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIRAT_H */
