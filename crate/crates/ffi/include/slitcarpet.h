#ifndef SLITCARPET_H
#define SLITCARPET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Potential problem for [`slitcarpet_conductance`].
 */
typedef enum {
  SLITCARPET_DIRECTION_LEFT_RIGHT = 0,
  SLITCARPET_DIRECTION_TOP_BOTTOM = 1,
} SlitcarpetDirection;

/**
 * Result codes.
 */
typedef enum {
  SLITCARPET_STATUS_OK = 0,
  SLITCARPET_STATUS_DOMAIN = 1,
  SLITCARPET_STATUS_PARSE = 2,
  SLITCARPET_STATUS_INVALID_TAG = 3,
  SLITCARPET_STATUS_LEVEL_ORDER = 4,
  SLITCARPET_STATUS_GRID_MISALIGNED = 5,
  SLITCARPET_STATUS_NOT_CONVERGED = 6,
  SLITCARPET_STATUS_VERIFICATION = 7,
  SLITCARPET_STATUS_INVALID_L_FUNCTION = 8,
  SLITCARPET_STATUS_OVERFLOW = 9,
  SLITCARPET_STATUS_IO = 10,
  SLITCARPET_STATUS_NULL_POINTER = 11,
  SLITCARPET_STATUS_UTF8 = 12,
  SLITCARPET_STATUS_BUFFER_TOO_SMALL = 13,
  SLITCARPET_STATUS_PANIC = 14,
} SlitcarpetStatus;

/**
 * A quasisymmetry `ι ∘ shear(h)` of the double.
 */
typedef struct SlitcarpetElement SlitcarpetElement;

/**
 * A piecewise-linear shear function.
 */
typedef struct SlitcarpetLFunction SlitcarpetLFunction;

/**
 * A point of `Q̄_n` or of its double.
 */
typedef struct SlitcarpetPoint SlitcarpetPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version string, static and NUL-terminated.
 */
const char *slitcarpet_version(void);

/**
 * Copies the calling thread's last error message into `buf`. Returns the
 * length of the full message; nothing is written if `len` is too small.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t slitcarpet_last_error(char *buf, size_t len);

/**
 * Number of slits of generation at most `level`.
 *
 * # Safety
 * `out` must be valid for writing.
 */
SlitcarpetStatus slitcarpet_slit_count(uint32_t level, size_t *out);

/**
 * Parses `x,y[,L|R][,front|back]`.
 *
 * # Safety
 * `s` must be a NUL-terminated string and `out` valid for writing.
 */
SlitcarpetStatus slitcarpet_point_parse(const char *s, SlitcarpetPoint **out);

/**
 * # Safety
 * `p` must be null or a handle from this library, not yet freed.
 */
void slitcarpet_point_free(SlitcarpetPoint *p);

/**
 * Coordinates as doubles.
 *
 * # Safety
 * `p` must be a live handle; `x` and `y` valid for writing.
 */
SlitcarpetStatus slitcarpet_point_coords(const SlitcarpetPoint *p, double *x, double *y);

/**
 * Text form `x y [L|R] [front|back]` into `buf`.
 *
 * # Safety
 * `p` must be a live handle and `buf` valid for `len` bytes.
 */
SlitcarpetStatus slitcarpet_point_format(const SlitcarpetPoint *p, char *buf, size_t len);

/**
 * Geodesic distance in `Q̄_n`.
 *
 * # Safety
 * `p` and `q` must be live handles; `out` valid for writing.
 */
SlitcarpetStatus slitcarpet_distance_level(uint32_t n,
                                           const SlitcarpetPoint *p,
                                           const SlitcarpetPoint *q,
                                           double *out);

/**
 * Geodesic distance in the double of `Q̄_n`.
 *
 * # Safety
 * `p` and `q` must be live handles; `out` valid for writing.
 */
SlitcarpetStatus slitcarpet_distance_double(uint32_t n,
                                            const SlitcarpetPoint *p,
                                            const SlitcarpetPoint *q,
                                            double *out);

/**
 * Area of the ball `B(p, r)` in `Q̄_n`, counted on grid `g`.
 *
 * # Safety
 * `p` must be a live handle; `out` valid for writing.
 */
SlitcarpetStatus slitcarpet_ball_mass(uint32_t n,
                                      const SlitcarpetPoint *p,
                                      double r,
                                      uint32_t g,
                                      double *out);

/**
 * Effective conductance of the level-`n` network on grid `g`.
 *
 * # Safety
 * `out` must be valid for writing.
 */
SlitcarpetStatus slitcarpet_conductance(uint32_t n,
                                        uint32_t g,
                                        SlitcarpetDirection direction,
                                        double *out);

/**
 * Parses `N v0 v1 ... v_{2^N}`.
 *
 * # Safety
 * `s` must be a NUL-terminated string and `out` valid for writing.
 */
SlitcarpetStatus slitcarpet_lfunction_parse(const char *s, SlitcarpetLFunction **out);

/**
 * # Safety
 * `h` must be null or a handle from this library, not yet freed.
 */
void slitcarpet_lfunction_free(SlitcarpetLFunction *h);

/**
 * Lipschitz constant.
 *
 * # Safety
 * `h` must be a live handle; `out` valid for writing.
 */
SlitcarpetStatus slitcarpet_lfunction_lip(const SlitcarpetLFunction *h, double *out);

/**
 * Parses `rvf-bits [N v0 ...]`, e.g. `101 2 0 0 0 1/2 0`.
 *
 * # Safety
 * `s` must be a NUL-terminated string and `out` valid for writing.
 */
SlitcarpetStatus slitcarpet_element_parse(const char *s, SlitcarpetElement **out);

/**
 * # Safety
 * `g` must be null or a handle from this library, not yet freed.
 */
void slitcarpet_element_free(SlitcarpetElement *g);

/**
 * Text form of an element into `buf`.
 *
 * # Safety
 * `g` must be a live handle and `buf` valid for `len` bytes.
 */
SlitcarpetStatus slitcarpet_element_format(const SlitcarpetElement *g, char *buf, size_t len);

/**
 * `a ∘ b` as a new handle.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` valid for writing.
 */
SlitcarpetStatus slitcarpet_element_compose(const SlitcarpetElement *a,
                                            const SlitcarpetElement *b,
                                            SlitcarpetElement **out);

/**
 * Inverse as a new handle.
 *
 * # Safety
 * `g` must be a live handle; `out` valid for writing.
 */
SlitcarpetStatus slitcarpet_element_inverse(const SlitcarpetElement *g, SlitcarpetElement **out);

/**
 * Image of a point of the double as a new handle.
 *
 * # Safety
 * `g` and `p` must be live handles; `out` valid for writing.
 */
SlitcarpetStatus slitcarpet_element_apply(const SlitcarpetElement *g,
                                          const SlitcarpetPoint *p,
                                          SlitcarpetPoint **out);

/**
 * Whether the element permutes the level-`level` slits of the double.
 *
 * # Safety
 * `g` must be a live handle; `out` valid for writing.
 */
SlitcarpetStatus slitcarpet_cohopf_check(const SlitcarpetElement *g, uint32_t level, bool *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SLITCARPET_H */
