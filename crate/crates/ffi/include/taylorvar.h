#ifndef TAYLORVAR_H
#define TAYLORVAR_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every entry point.
typedef enum TvStatus {
  TV_STATUS_OK = 0,
  TV_STATUS_NULL_POINTER = 1,
  TV_STATUS_INVALID_ARGUMENT = 2,
  TV_STATUS_INVALID_PRIME = 3,
  TV_STATUS_OVERFLOW = 4,
  TV_STATUS_SINGULAR = 5,
  TV_STATUS_SAMPLES_EXHAUSTED = 6,
  TV_STATUS_NOT_SQUARE = 7,
  TV_STATUS_UNSUPPORTED = 8,
  TV_STATUS_PARSE = 9,
  TV_STATUS_OUT_OF_RANGE = 10,
  TV_STATUS_PANIC = 11,
} TvStatus;

// The exceptional pairs for `n` variables.
typedef struct TvCensus TvCensus;

// A Padé matrix evaluated at a series.
typedef struct TvPadeMatrix TvPadeMatrix;

// A truncated polynomial over a prime field.
typedef struct TvSeries TvSeries;

// Dimension data of one Taylor variety.
typedef struct TvDimension {
  uint64_t expected;
  uint64_t actual;
  uint64_t ambient;
  uint64_t parameters;
  uint64_t defect;
  uint64_t fiber;
} TvDimension;

typedef struct TvFroberg {
  int64_t alpha;
  int64_t beta;
  int64_t w;
  bool defective_predicted;
} TvFroberg;

typedef struct TvHessian {
  uint64_t vars;
  uint64_t rank;
  uint64_t corank;
} TvHessian;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message (NUL-terminated, truncated to fit) into
// `buf` and returns the full message length in bytes.
//
// # Safety
// `buf` must be null or valid for writes of `len` bytes.
size_t tv_last_error(char *buf, size_t len);

// Parses a polynomial such as `"1 + 2*x1 - x1*x2^2"` in `n` variables,
// truncated at total degree `bound`.
//
// # Safety
// `text` must be a valid NUL-terminated string, `out` a valid pointer.
enum TvStatus tv_series_parse(uint64_t prime,
                              uint32_t n,
                              uint32_t bound,
                              const char *text,
                              struct TvSeries **out);

// Coefficient of `x^exponent` (an array of `n` entries) as a residue.
//
// # Safety
// `series` must come from [`tv_series_parse`]; `exponent` must hold `n` values.
enum TvStatus tv_series_coeff(const struct TvSeries *series,
                              const uint32_t *exponent,
                              uint32_t n,
                              uint64_t *out);

// # Safety
// `series` must be null or a handle from [`tv_series_parse`] not yet freed.
void tv_series_free(struct TvSeries *series);

// Builds `P_T` of type `(d, e)` for the series (its bound is `m`).
//
// # Safety
// `series` must be a live handle; `out` a valid pointer.
enum TvStatus tv_pade_matrix_new(const struct TvSeries *series,
                                 uint32_t d,
                                 uint32_t e,
                                 struct TvPadeMatrix **out);

// # Safety
// `matrix` must be a live handle; `rows` and `cols` valid pointers.
enum TvStatus tv_pade_matrix_shape(const struct TvPadeMatrix *matrix, size_t *rows, size_t *cols);

// Entry at `(row, col)` as a residue in `0..p`.
//
// # Safety
// `matrix` must be a live handle; `out` a valid pointer.
enum TvStatus tv_pade_matrix_get(const struct TvPadeMatrix *matrix,
                                 size_t row,
                                 size_t col,
                                 uint64_t *out);

// # Safety
// `matrix` must be a live handle; `out` a valid pointer.
enum TvStatus tv_pade_matrix_rank(const struct TvPadeMatrix *matrix, size_t *out);

// # Safety
// `matrix` must be null or a handle from [`tv_pade_matrix_new`] not yet freed.
void tv_pade_matrix_free(struct TvPadeMatrix *matrix);

// Dimension from the rank of the reduced Padé matrix at random points.
//
// # Safety
// `out` must be a valid pointer.
enum TvStatus tv_taylor_dimension(uint64_t prime,
                                  uint64_t seed,
                                  uint32_t trials,
                                  uint32_t n,
                                  uint32_t d,
                                  uint32_t e,
                                  uint32_t m,
                                  struct TvDimension *out);

// Dimension from the Jacobian of the parametrization.
//
// # Safety
// `out` must be a valid pointer.
enum TvStatus tv_jacobian_dimension(uint64_t prime,
                                    uint64_t seed,
                                    uint32_t trials,
                                    uint32_t n,
                                    uint32_t d,
                                    uint32_t e,
                                    uint32_t m,
                                    uint64_t *out);

// # Safety
// `out` must be a valid pointer.
enum TvStatus tv_froberg(uint32_t n, uint32_t d, uint32_t e, struct TvFroberg *out);

// # Safety
// `out` must be a valid pointer.
enum TvStatus tv_compute_d0(uint32_t n, uint32_t *out);

// # Safety
// `out` must be a valid pointer.
enum TvStatus tv_census_new(uint32_t n, struct TvCensus **out);

// Number of pairs and the threshold `d0`.
//
// # Safety
// `census` must be a live handle; `count` and `d0` valid pointers.
enum TvStatus tv_census_info(const struct TvCensus *census, size_t *count, uint32_t *d0);

// Pair number `index` in lexicographic order.
//
// # Safety
// `census` must be a live handle; `d` and `e` valid pointers.
enum TvStatus tv_census_pair(const struct TvCensus *census, size_t index, uint32_t *d, uint32_t *e);

// # Safety
// `census` must be null or a handle from [`tv_census_new`] not yet freed.
void tv_census_free(struct TvCensus *census);

// Generic Hessian rank of `det(P_T)` for a square Padé matrix.
//
// # Safety
// `out` must be a valid pointer.
enum TvStatus tv_hessian_rank(uint64_t prime,
                              uint64_t seed,
                              uint32_t trials,
                              uint32_t n,
                              uint32_t d,
                              uint32_t e,
                              uint32_t m,
                              struct TvHessian *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAYLORVAR_H */
