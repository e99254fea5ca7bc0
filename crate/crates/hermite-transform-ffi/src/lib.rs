//! C ABI for the factored Hermite transform.
//!
//! The interface deals exclusively in opaque [`HtfTransform`] handles
//! created by this library and status codes; no Rust type crosses the
//! boundary.  Complex vectors are passed as separate real and imaginary
//! arrays.  All array arguments must hold exactly `htf_size(t)`
//! elements.
//!
//! Every entry point catches panics and reports them as
//! `HTF_STATUS_NUMERICAL_FAILURE`, so no unwinding crosses the ABI.

use std::ffi::CStr;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use num_complex::Complex64;

use hermite_transform::error::Error;
use hermite_transform::transform::io::{read_factors, write_factors};
use hermite_transform::transform::{build_golub_welsch, TransformFactors};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HtfStatus {
    Ok = 0,
    InvalidArgument = 1,
    NumericalFailure = 2,
    IoError = 3,
    NullPointer = 4,
}

/// Opaque handle to a factored transform of fixed size.
pub struct HtfTransform {
    inner: TransformFactors,
}

fn status_of(e: &Error) -> HtfStatus {
    match e {
        Error::Domain(_) | Error::SizeMismatch { .. } => HtfStatus::InvalidArgument,
        Error::NoConvergence { .. } | Error::NonFinite { .. } | Error::Precision(_) => {
            HtfStatus::NumericalFailure
        }
        Error::Format(_) | Error::Io(_) => HtfStatus::IoError,
    }
}

fn guarded(body: impl FnOnce() -> HtfStatus) -> HtfStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(HtfStatus::NumericalFailure)
}

/// # Safety
/// `path` must be a NUL-terminated string valid for reads.
unsafe fn path_from(path: *const c_char) -> Result<&'static Path, HtfStatus> {
    if path.is_null() {
        return Err(HtfStatus::NullPointer);
    }
    CStr::from_ptr(path)
        .to_str()
        .map(Path::new)
        .map_err(|_| HtfStatus::InvalidArgument)
}

unsafe fn hand_out(out: *mut *mut HtfTransform, f: TransformFactors) -> HtfStatus {
    *out = Box::into_raw(Box::new(HtfTransform { inner: f }));
    HtfStatus::Ok
}

/// Build the factored transform of size `n` and store a handle in
/// `*out`.  On any failure `*out` is untouched.
///
/// # Safety
/// `out` must be valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn htf_build_golub_welsch(
    n: usize,
    out: *mut *mut HtfTransform,
) -> HtfStatus {
    if out.is_null() {
        return HtfStatus::NullPointer;
    }
    guarded(|| match build_golub_welsch(n) {
        Ok(f) => hand_out(out, f),
        Err(e) => status_of(&e),
    })
}

/// Load a transform from a factor container file written by `htf_save`
/// (or by the `hermite` CLI's cache).
///
/// # Safety
/// `path` must be a valid NUL-terminated string; `out` must be valid
/// for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn htf_load(path: *const c_char, out: *mut *mut HtfTransform) -> HtfStatus {
    if out.is_null() {
        return HtfStatus::NullPointer;
    }
    let path = match path_from(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    guarded(|| match read_factors(path) {
        Ok(f) => hand_out(out, f),
        Err(e) => status_of(&e),
    })
}

/// Write the transform to a factor container file.
///
/// # Safety
/// `t` must be a live handle from this library; `path` must be a valid
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn htf_save(t: *const HtfTransform, path: *const c_char) -> HtfStatus {
    let Some(t) = t.as_ref() else {
        return HtfStatus::NullPointer;
    };
    let path = match path_from(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    guarded(|| match write_factors(path, &t.inner) {
        Ok(()) => HtfStatus::Ok,
        Err(e) => status_of(&e),
    })
}

/// Transform size N, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn htf_size(t: *const HtfTransform) -> usize {
    t.as_ref().map_or(0, |t| t.inner.n())
}

/// Copy the N quadrature nodes (ascending) into `out`.
///
/// # Safety
/// `t` must be a live handle; `out` must be valid for `htf_size(t)`
/// f64 writes.
#[no_mangle]
pub unsafe extern "C" fn htf_nodes(t: *const HtfTransform, out: *mut f64) -> HtfStatus {
    let Some(t) = t.as_ref() else {
        return HtfStatus::NullPointer;
    };
    if out.is_null() {
        return HtfStatus::NullPointer;
    }
    let dst = std::slice::from_raw_parts_mut(out, t.inner.n());
    dst.copy_from_slice(t.inner.nodes());
    HtfStatus::Ok
}

unsafe fn apply_real(
    t: *const HtfTransform,
    input: *const f64,
    output: *mut f64,
    op: impl Fn(&TransformFactors, &[f64]) -> Result<Vec<f64>, Error>,
) -> HtfStatus {
    let Some(t) = t.as_ref() else {
        return HtfStatus::NullPointer;
    };
    if input.is_null() || output.is_null() {
        return HtfStatus::NullPointer;
    }
    let n = t.inner.n();
    let x = std::slice::from_raw_parts(input, n);
    guarded(|| match op(&t.inner, x) {
        Ok(y) => {
            std::slice::from_raw_parts_mut(output, n).copy_from_slice(&y);
            HtfStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

unsafe fn apply_complex(
    t: *const HtfTransform,
    re_in: *const f64,
    im_in: *const f64,
    re_out: *mut f64,
    im_out: *mut f64,
    op: impl Fn(&TransformFactors, &[Complex64]) -> Result<Vec<Complex64>, Error>,
) -> HtfStatus {
    let Some(t) = t.as_ref() else {
        return HtfStatus::NullPointer;
    };
    if re_in.is_null() || im_in.is_null() || re_out.is_null() || im_out.is_null() {
        return HtfStatus::NullPointer;
    }
    let n = t.inner.n();
    let re = std::slice::from_raw_parts(re_in, n);
    let im = std::slice::from_raw_parts(im_in, n);
    let x: Vec<Complex64> = re
        .iter()
        .zip(im)
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect();
    guarded(|| match op(&t.inner, &x) {
        Ok(y) => {
            let ro = std::slice::from_raw_parts_mut(re_out, n);
            let io = std::slice::from_raw_parts_mut(im_out, n);
            for (k, v) in y.iter().enumerate() {
                ro[k] = v.re;
                io[k] = v.im;
            }
            HtfStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Synthesis: values = T·coeffs.
///
/// # Safety
/// `t` must be a live handle; `coeffs` and `values` must be valid for
/// `htf_size(t)` f64 reads/writes respectively.
#[no_mangle]
pub unsafe extern "C" fn htf_forward(
    t: *const HtfTransform,
    coeffs: *const f64,
    values: *mut f64,
) -> HtfStatus {
    apply_real(t, coeffs, values, TransformFactors::forward)
}

/// Analysis: coeffs = T⁻¹·values.
///
/// # Safety
/// As for `htf_forward`.
#[no_mangle]
pub unsafe extern "C" fn htf_inverse(
    t: *const HtfTransform,
    values: *const f64,
    coeffs: *mut f64,
) -> HtfStatus {
    apply_real(t, values, coeffs, TransformFactors::inverse)
}

/// Synthesis on a complex vector passed as split real/imaginary arrays.
///
/// # Safety
/// `t` must be a live handle; all four arrays must be valid for
/// `htf_size(t)` f64 reads (inputs) or writes (outputs).
#[no_mangle]
pub unsafe extern "C" fn htf_forward_complex(
    t: *const HtfTransform,
    re_in: *const f64,
    im_in: *const f64,
    re_out: *mut f64,
    im_out: *mut f64,
) -> HtfStatus {
    apply_complex(
        t,
        re_in,
        im_in,
        re_out,
        im_out,
        TransformFactors::forward_complex,
    )
}

/// Analysis on a complex vector passed as split real/imaginary arrays.
///
/// # Safety
/// As for `htf_forward_complex`.
#[no_mangle]
pub unsafe extern "C" fn htf_inverse_complex(
    t: *const HtfTransform,
    re_in: *const f64,
    im_in: *const f64,
    re_out: *mut f64,
    im_out: *mut f64,
) -> HtfStatus {
    apply_complex(
        t,
        re_in,
        im_in,
        re_out,
        im_out,
        TransformFactors::inverse_complex,
    )
}

/// Release a handle.  Null is a no-op.  The handle must not be used
/// afterwards.
///
/// # Safety
/// `t` must be null or an unreleased handle from this library.
#[no_mangle]
pub unsafe extern "C" fn htf_free(t: *mut HtfTransform) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}
