#ifndef STACKYFAN_H
#define STACKYFAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Positivity convention for polarized Hodge structures.
typedef enum SfConvention {
  SF_CONVENTION_CONJUGATE_FIRST = 0,
  SF_CONVENTION_CONJUGATE_SECOND = 1,
} SfConvention;

// Status codes. The first three agree with the command-line exit codes.
typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_INVALID_INPUT = 2,
  SF_STATUS_MATH_FAILURE = 3,
  SF_STATUS_NULL_ARGUMENT = 4,
  SF_STATUS_INVALID_UTF8 = 5,
  SF_STATUS_UNKNOWN_COMMAND = 6,
  SF_STATUS_PANIC = 7,
} SfStatus;

// Options shared by all subcommands.
typedef struct SfOptions SfOptions;

// Outcome of one call.
typedef struct SfResult SfResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Runs `command` on the JSON text `input`. `options` may be null.
//
// On return `*out` holds a result handle whenever the command was dispatched,
// including mathematical failures; it is null for argument errors, which are
// described by [`sf_last_error`]. The return value equals the result status.
//
// # Safety
// `command` and `input` must be null or valid NUL-terminated strings,
// `options` null or a live handle, and `out` a valid pointer.
enum SfStatus sf_run(const char *command,
                     const char *input,
                     const struct SfOptions *options,
                     struct SfResult **out);

// # Safety
// `result` must be a live handle.
enum SfStatus sf_result_status(const struct SfResult *result);

// JSON payload; valid until the handle is freed.
//
// # Safety
// `result` must be null or a live handle.
const char *sf_result_json(const struct SfResult *result);

// # Safety
// `result` must be null or a live handle.
size_t sf_result_diagnostic_count(const struct SfResult *result);

// The `index`-th diagnostic, or null when out of range.
//
// # Safety
// `result` must be null or a live handle.
const char *sf_result_diagnostic(const struct SfResult *result, size_t index);

// # Safety
// `result` must be null or a handle from [`sf_run`] not yet freed.
void sf_result_free(struct SfResult *result);

struct SfOptions *sf_options_new(void);

// # Safety
// `options` must be null or a handle from [`sf_options_new`] not yet freed.
void sf_options_free(struct SfOptions *options);

// Highest degree for cohomology and homology commands.
//
// # Safety
// `options` must be null or a live handle.
enum SfStatus sf_options_set_max_degree(struct SfOptions *options, size_t degree);

// # Safety
// `options` must be null or a live handle.
enum SfStatus sf_options_set_convention(struct SfOptions *options, enum SfConvention convention);

// Sample points for nilpotent-orbit checks, in command-line syntax
// (`"1,2,4"`, or `"1:2,2:4"` for several coordinates).
//
// # Safety
// `options` must be null or a live handle; `samples` null or a NUL-terminated string.
enum SfStatus sf_options_set_y_samples(struct SfOptions *options, const char *samples);

// Message for the most recent failure on this thread, or null.
// Valid until the next call into the library on the same thread.
const char *sf_last_error(void);

// Library version as a static string.
const char *sf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STACKYFAN_H */
