#ifndef WHITTAKER_LAB_H
#define WHITTAKER_LAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WlStatus {
  WL_STATUS_OK = 0,
  WL_STATUS_NULL_POINTER = 1,
  WL_STATUS_INVALID_UTF8 = 2,
  WL_STATUS_PARSE_ERROR = 3,
  WL_STATUS_INVALID_CONFIG = 4,
  WL_STATUS_SINGULAR_TYPE = 5,
  WL_STATUS_TRUNCATION_TOO_SMALL = 6,
  WL_STATUS_INVALID_MODULE = 7,
  WL_STATUS_DIMENSION_MISMATCH = 8,
  /*
   The task ran but at least one of its checks failed.
   */
  WL_STATUS_CHECKS_FAILED = 9,
  WL_STATUS_PANIC = 10,
  WL_STATUS_OTHER = 11,
} WlStatus;

/*
 Opaque handle to a finite-dimensional `gl_n`-module.
 */
typedef struct WlGlModule WlGlModule;

/*
 Opaque handle to a tensor module `A_n^a ⊗ V`.
 */
typedef struct WlTensorModule WlTensorModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static string; do not free.
 */
const char *wl_version(void);

/*
 Message of the last failed call on this thread, or null. Valid until the
 next call into the library on this thread; do not free.
 */
const char *wl_last_error(void);

/*
 Releases a string returned by the library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void wl_string_free(char *s);

/*
 Builds a module from `trivial`, `natural`, `exterior:k` or a JSON description.

 # Safety
 `spec` must be a valid C string and `out` writable.
 */
enum WlStatus wl_gl_module_new(size_t n, const char *spec, struct WlGlModule **out);

/*
 Dimension of the module, or 0 for a null handle.

 # Safety
 `module` must be null or a live handle.
 */
size_t wl_gl_module_dim(const struct WlGlModule *module);

/*
 # Safety
 `module` must be null or a live handle; it is invalid afterwards.
 */
void wl_gl_module_free(struct WlGlModule *module);

/*
 Builds `A_n^a ⊗ V` with `a` given as `"1,1/2"`; `module` is copied.

 # Safety
 `a` must be a valid C string, `module` a live handle and `out` writable.
 */
enum WlStatus wl_tensor_module_new(const char *a,
                                   const struct WlGlModule *module,
                                   struct WlTensorModule **out);

/*
 # Safety
 `module` must be null or a live handle; it is invalid afterwards.
 */
void wl_tensor_module_free(struct WlTensorModule *module);

/*
 Dimension of the Whittaker vectors in the degree-`degree` truncation.

 # Safety
 `module` must be a live handle and `out` writable.
 */
enum WlStatus wl_tensor_module_whittaker_dim(const struct WlTensorModule *module,
                                             uint32_t degree,
                                             size_t *out);

/*
 Decomposes `poly ⊗ v_component` (1-based) in the free basis and writes
 the coefficients as a JSON array of `{h_exponent, basis_index, coeff}`.

 # Safety
 `module` must be a live handle, `poly` a valid C string and `out_json`
 writable. Free the result with [`wl_string_free`].
 */
enum WlStatus wl_tensor_module_decompose(const struct WlTensorModule *module,
                                         const char *poly,
                                         size_t component,
                                         char **out_json);

/*
 Bracket of two vector fields written like `"t1^2*d1 + 3*d2"`.

 # Safety
 `x`, `y` must be valid C strings and `out` writable. Free the result
 with [`wl_string_free`].
 */
enum WlStatus wl_witt_bracket(size_t n, const char *x, const char *y, char **out);

/*
 Runs a task from a JSON config (the same keys as the TOML config file)
 and writes the JSON report. The report is written whenever the task
 ran, including when it returns [`WlStatus::ChecksFailed`].

 # Safety
 `config_json` must be a valid C string and `out_report` writable. Free
 the result with [`wl_string_free`].
 */
enum WlStatus wl_run_task(const char *config_json, char **out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WHITTAKER_LAB_H */
