#ifndef HILBSERIES_H
#define HILBSERIES_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes. The first four agree with the CLI exit codes.
 */
typedef enum HsStatus {
  HS_STATUS_OK = 0,
  HS_STATUS_VERIFICATION = 1,
  HS_STATUS_INPUT = 2,
  HS_STATUS_LIMIT = 3,
  HS_STATUS_NULL_POINTER = 4,
  HS_STATUS_INVALID_UTF8 = 5,
  HS_STATUS_OVERFLOW = 6,
  HS_STATUS_OUT_OF_RANGE = 7,
  HS_STATUS_PANIC = 8,
} HsStatus;

/*
 A parsed input document: algebra, modules, ideals, witnesses.
 */
typedef struct HsDocument HsDocument;

/*
 A truncated power series with integer coefficients.
 */
typedef struct HsSeries HsSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string. Do not free.
 */
const char *hs_version(void);

/*
 Message of the last failed call on this thread, or NULL. Valid until the
 next `hs_*` call on the same thread. Do not free.
 */
const char *hs_last_error(void);

/*
 Parse a presentation document.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HsStatus hs_document_parse(const char *text, struct HsDocument **out);

/*
 # Safety
 `doc` must be NULL or a handle from [`hs_document_parse`] not yet freed.
 */
void hs_document_free(struct HsDocument *doc);

/*
 Number of modules declared in the document.

 # Safety
 `doc` must be a live handle or NULL.
 */
size_t hs_document_module_count(const struct HsDocument *doc);

/*
 Hilbert function of the algebra in degrees 0..=n.

 # Safety
 `doc` must be a live handle and `out` a valid pointer.
 */
enum HsStatus hs_algebra_dims(const struct HsDocument *doc, uint32_t n, struct HsSeries **out);

/*
 Hilbert function of the named module in degrees 0..=n.

 # Safety
 `doc` must be a live handle, `name` NUL-terminated, `out` valid.
 */
enum HsStatus hs_module_dims(const struct HsDocument *doc,
                             const char *name,
                             uint32_t n,
                             struct HsSeries **out);

/*
 Build a series from `len` coefficients.

 # Safety
 `coeffs` must point to `len` readable values; `out` must be valid.
 */
enum HsStatus hs_series_new(const int64_t *coeffs, size_t len, struct HsSeries **out);

/*
 # Safety
 `s` must be NULL or a live series handle.
 */
void hs_series_free(struct HsSeries *s);

/*
 Number of stored coefficients (truncation + 1); 0 for NULL.

 # Safety
 `s` must be NULL or a live series handle.
 */
size_t hs_series_len(const struct HsSeries *s);

/*
 Coefficient of z^k. Fails with `HS_STATUS_OVERFLOW` if it does not fit.

 # Safety
 `s` must be a live handle and `out` valid.
 */
enum HsStatus hs_series_coeff(const struct HsSeries *s, size_t k, int64_t *out);

/*
 Space-separated coefficients; free with [`hs_string_free`]. NULL on a
 NULL handle.

 # Safety
 `s` must be NULL or a live series handle.
 */
char *hs_series_to_string(const struct HsSeries *s);

/*
 Lexicographic comparison: `*out` is -1, 0 or 1. Series must share a
 truncation.

 # Safety
 `a`, `b` must be live handles and `out` valid.
 */
enum HsStatus hs_series_lex_compare(const struct HsSeries *a,
                                    const struct HsSeries *b,
                                    int32_t *out);

/*
 Run a CLI command (arguments without the program name) and return its
 JSON document. `*exit_code`, if non-NULL, receives the CLI exit code.
 Returns NULL only on invalid arguments; free with [`hs_string_free`].

 # Safety
 `argv` must point to `argc` NUL-terminated strings.
 */
char *hs_run_command_json(const char *const *argv, size_t argc, int32_t *exit_code);

/*
 # Safety
 `s` must be NULL or a string returned by this library, not yet freed.
 */
void hs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HILBSERIES_H */
