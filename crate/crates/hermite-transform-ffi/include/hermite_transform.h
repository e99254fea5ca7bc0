#ifndef HERMITE_TRANSFORM_H
#define HERMITE_TRANSFORM_H

/* Generated by cbindgen from hermite-transform-ffi; regenerate with `cargo build -p hermite-transform-ffi --features generate-header` instead of editing. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum HtfStatus {
  HTF_STATUS_OK = 0,
  HTF_STATUS_INVALID_ARGUMENT = 1,
  HTF_STATUS_NUMERICAL_FAILURE = 2,
  HTF_STATUS_IO_ERROR = 3,
  HTF_STATUS_NULL_POINTER = 4,
} HtfStatus;

// Opaque handle to a factored transform of fixed size.
typedef struct HtfTransform HtfTransform;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Build the factored transform of size `n` and store a handle in
// `*out`.  On any failure `*out` is untouched.
//
// # Safety
// `out` must be valid for a single pointer write.
enum HtfStatus htf_build_golub_welsch(size_t n, struct HtfTransform **out);

// Load a transform from a factor container file written by `htf_save`
// (or by the `hermite` CLI's cache).
//
// # Safety
// `path` must be a valid NUL-terminated string; `out` must be valid
// for a single pointer write.
enum HtfStatus htf_load(const char *path, struct HtfTransform **out);

// Write the transform to a factor container file.
//
// # Safety
// `t` must be a live handle from this library; `path` must be a valid
// NUL-terminated string.
enum HtfStatus htf_save(const struct HtfTransform *t, const char *path);

// Transform size N, or 0 for a null handle.
//
// # Safety
// `t` must be null or a live handle from this library.
size_t htf_size(const struct HtfTransform *t);

// Copy the N quadrature nodes (ascending) into `out`.
//
// # Safety
// `t` must be a live handle; `out` must be valid for `htf_size(t)`
// f64 writes.
enum HtfStatus htf_nodes(const struct HtfTransform *t, double *out);

// Synthesis: values = T·coeffs.
//
// # Safety
// `t` must be a live handle; `coeffs` and `values` must be valid for
// `htf_size(t)` f64 reads/writes respectively.
enum HtfStatus htf_forward(const struct HtfTransform *t, const double *coeffs, double *values);

// Analysis: coeffs = T⁻¹·values.
//
// # Safety
// As for `htf_forward`.
enum HtfStatus htf_inverse(const struct HtfTransform *t, const double *values, double *coeffs);

// Synthesis on a complex vector passed as split real/imaginary arrays.
//
// # Safety
// `t` must be a live handle; all four arrays must be valid for
// `htf_size(t)` f64 reads (inputs) or writes (outputs).
enum HtfStatus htf_forward_complex(const struct HtfTransform *t,
                                   const double *re_in,
                                   const double *im_in,
                                   double *re_out,
                                   double *im_out);

// Analysis on a complex vector passed as split real/imaginary arrays.
//
// # Safety
// As for `htf_forward_complex`.
enum HtfStatus htf_inverse_complex(const struct HtfTransform *t,
                                   const double *re_in,
                                   const double *im_in,
                                   double *re_out,
                                   double *im_out);

// Release a handle.  Null is a no-op.  The handle must not be used
// afterwards.
//
// # Safety
// `t` must be null or an unreleased handle from this library.
void htf_free(struct HtfTransform *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HERMITE_TRANSFORM_H */
