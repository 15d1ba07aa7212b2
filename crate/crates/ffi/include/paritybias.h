/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef PARITYBIAS_H
#define PARITYBIAS_H



#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes.
 */
typedef enum PbStatus {
  PB_STATUS_OK = 0,
  PB_STATUS_NULL_POINTER = 1,
  PB_STATUS_INVALID_UTF8 = 2,
  PB_STATUS_INVALID_PARAMETER = 3,
  PB_STATUS_CAP_EXCEEDED = 4,
  PB_STATUS_DOMAIN = 5,
  PB_STATUS_COVERAGE = 6,
  PB_STATUS_TIER_DISAGREEMENT = 7,
  PB_STATUS_NON_INVERTIBLE = 8,
  PB_STATUS_DIVERGENT_PRODUCT = 9,
  PB_STATUS_BEYOND_TRUNCATION = 10,
  PB_STATUS_UNSUPPORTED = 11,
  PB_STATUS_OVERFLOW = 12,
  PB_STATUS_PANIC = 13,
} PbStatus;

/*
 Opaque truncated power series.
 */
typedef struct PbSeries PbSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *pb_version(void);

/*
 Message for the last failed call on this thread (empty after a success).
 The pointer stays valid until the next call on this thread.
 */
const char *pb_last_error_message(void);

/*
 Builds a named generating function truncated at `order`. Pass `m = 0`
 for families without a parameter.

 # Safety
 `family` must be a NUL-terminated string; `out` must be writable.
 */
enum PbStatus pb_series_build(const char *family, uint32_t m, size_t order, struct PbSeries **out);

/*
 Series with the given `len` coefficients, truncated at `len - 1`.

 # Safety
 `coeffs` must point to `len` readable values; `out` must be writable.
 */
enum PbStatus pb_series_from_i64(const int64_t *coeffs, size_t len, struct PbSeries **out);

/*
 `a * b` at the smaller of the two orders.

 # Safety
 `a` and `b` must be live handles; `out` must be writable.
 */
enum PbStatus pb_series_mul(const struct PbSeries *a,
                            const struct PbSeries *b,
                            struct PbSeries **out);

/*
 `a - b` at the smaller of the two orders.

 # Safety
 `a` and `b` must be live handles; `out` must be writable.
 */
enum PbStatus pb_series_sub(const struct PbSeries *a,
                            const struct PbSeries *b,
                            struct PbSeries **out);

/*
 `1 / a`; the constant term must be 1 or -1.

 # Safety
 `a` must be a live handle; `out` must be writable.
 */
enum PbStatus pb_series_reciprocal(const struct PbSeries *a, struct PbSeries **out);

/*
 # Safety
 `s` must be a live handle; `out` must be writable.
 */
enum PbStatus pb_series_order(const struct PbSeries *s, size_t *out);

/*
 Coefficient of `q^n` as a decimal string.

 # Safety
 `s` must be a live handle; `out` must be writable.
 */
enum PbStatus pb_series_coefficient(const struct PbSeries *s, size_t n, char **out);

/*
 Coefficient of `q^n`; fails with `OVERFLOW` when it does not fit.

 # Safety
 `s` must be a live handle; `out` must be writable.
 */
enum PbStatus pb_series_coefficient_i64(const struct PbSeries *s, size_t n, int64_t *out);

/*
 Releases a series handle. Null is ignored.

 # Safety
 `s` must be null or a handle not yet freed.
 */
void pb_series_free(struct PbSeries *s);

/*
 Verifies a theorem by id (`m = 0` when it takes no parameter) on its
 claimed range up to `max_n`. Writes whether it holds and the full report
 as JSON.

 # Safety
 `theorem` must be a NUL-terminated string; `holds` and `report_json` must be writable.
 */
enum PbStatus pb_verify_theorem(const char *theorem,
                                uint32_t m,
                                size_t max_n,
                                size_t order,
                                bool *holds,
                                char **report_json);

/*
 Number of partitions of `n` with all parts `>= min_part`, none in
 `forbidden`, and strictly more parts `= j` than `= k` modulo `m`, as a
 decimal string. Uses the dynamic-programming oracle.

 # Safety
 `forbidden` must point to `forbidden_len` values (or be null with length 0); `out` must be writable.
 */
enum PbStatus pb_count_bias(size_t n,
                            uint32_t min_part,
                            const uint32_t *forbidden,
                            size_t forbidden_len,
                            uint32_t j,
                            uint32_t k,
                            uint32_t m,
                            char **out);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must be null or a string from this library not yet freed.
 */
void pb_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARITYBIAS_H */
