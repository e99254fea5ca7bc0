//! Exercises the C entry points exactly as a foreign caller would:
//! raw pointers, split complex arrays, status codes.

use std::ffi::CString;
use std::ptr;

use hermite_transform_ffi::*;

fn build(n: usize) -> *mut HtfTransform {
    let mut handle: *mut HtfTransform = ptr::null_mut();
    let status = unsafe { htf_build_golub_welsch(n, &mut handle) };
    assert_eq!(status, HtfStatus::Ok);
    assert!(!handle.is_null());
    handle
}

#[test]
fn build_query_and_free() {
    let t = build(33);
    unsafe {
        assert_eq!(htf_size(t), 33);
        let mut nodes = vec![0.0f64; 33];
        assert_eq!(htf_nodes(t, nodes.as_mut_ptr()), HtfStatus::Ok);
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        // Odd size puts the center node at 0 up to eigensolver noise;
        // spectra are not symmetrized behind the caller's back.
        assert!(nodes[16].abs() <= 1e-13);
        htf_free(t);
    }
}

#[test]
fn invalid_size_is_rejected_without_a_handle() {
    let mut handle: *mut HtfTransform = ptr::null_mut();
    let status = unsafe { htf_build_golub_welsch(0, &mut handle) };
    assert_eq!(status, HtfStatus::InvalidArgument);
    assert!(handle.is_null());
}

#[test]
fn null_pointers_are_reported_not_dereferenced() {
    let t = build(5);
    unsafe {
        assert_eq!(
            htf_build_golub_welsch(4, ptr::null_mut()),
            HtfStatus::NullPointer
        );
        assert_eq!(htf_size(ptr::null()), 0);
        assert_eq!(htf_nodes(t, ptr::null_mut()), HtfStatus::NullPointer);
        assert_eq!(
            htf_forward(ptr::null(), ptr::null(), ptr::null_mut()),
            HtfStatus::NullPointer
        );
        let buf = [0.0f64; 5];
        let mut out = [0.0f64; 5];
        assert_eq!(
            htf_forward(t, ptr::null(), out.as_mut_ptr()),
            HtfStatus::NullPointer
        );
        assert_eq!(htf_forward(t, buf.as_ptr(), ptr::null_mut()), HtfStatus::NullPointer);
        assert_eq!(htf_save(t, ptr::null()), HtfStatus::NullPointer);
        htf_free(t);
        htf_free(ptr::null_mut());
    }
}

#[test]
fn real_round_trip_through_the_abi() {
    let n = 64;
    let t = build(n);
    let coeffs: Vec<f64> = (0..n).map(|k| 1.0 / (1.0 + k as f64)).collect();
    let mut values = vec![0.0f64; n];
    let mut back = vec![0.0f64; n];
    unsafe {
        assert_eq!(
            htf_forward(t, coeffs.as_ptr(), values.as_mut_ptr()),
            HtfStatus::Ok
        );
        assert_eq!(
            htf_inverse(t, values.as_ptr(), back.as_mut_ptr()),
            HtfStatus::Ok
        );
        htf_free(t);
    }
    for (a, b) in coeffs.iter().zip(&back) {
        assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }
}

#[test]
fn complex_round_trip_through_the_abi() {
    let n = 48;
    let t = build(n);
    let re_in: Vec<f64> = (0..n).map(|k| (k as f64 * 0.1).cos()).collect();
    let im_in: Vec<f64> = (0..n).map(|k| (k as f64 * 0.2).sin()).collect();
    let mut re_mid = vec![0.0f64; n];
    let mut im_mid = vec![0.0f64; n];
    let mut re_out = vec![0.0f64; n];
    let mut im_out = vec![0.0f64; n];
    unsafe {
        assert_eq!(
            htf_forward_complex(
                t,
                re_in.as_ptr(),
                im_in.as_ptr(),
                re_mid.as_mut_ptr(),
                im_mid.as_mut_ptr()
            ),
            HtfStatus::Ok
        );
        assert_eq!(
            htf_inverse_complex(
                t,
                re_mid.as_ptr(),
                im_mid.as_ptr(),
                re_out.as_mut_ptr(),
                im_out.as_mut_ptr()
            ),
            HtfStatus::Ok
        );
        htf_free(t);
    }
    for ((r0, r1), (i0, i1)) in re_in.iter().zip(&re_out).zip(im_in.iter().zip(&im_out)) {
        assert!((r0 - r1).abs() <= 1e-12);
        assert!((i0 - i1).abs() <= 1e-12);
    }
}

#[test]
fn save_and_load_preserve_the_transform_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(
        dir.path()
            .join("factors.htf1")
            .to_str()
            .unwrap()
            .to_owned(),
    )
    .unwrap();

    let n = 17;
    let t = build(n);
    let mut loaded: *mut HtfTransform = ptr::null_mut();
    unsafe {
        assert_eq!(htf_save(t, path.as_ptr()), HtfStatus::Ok);
        assert_eq!(htf_load(path.as_ptr(), &mut loaded), HtfStatus::Ok);
        assert_eq!(htf_size(loaded), n);

        let mut a = vec![0.0f64; n];
        let mut b = vec![0.0f64; n];
        assert_eq!(htf_nodes(t, a.as_mut_ptr()), HtfStatus::Ok);
        assert_eq!(htf_nodes(loaded, b.as_mut_ptr()), HtfStatus::Ok);
        assert_eq!(a, b);

        // Same coefficients through both handles: identical results.
        let coeffs: Vec<f64> = (0..n).map(|k| (k as f64).sin()).collect();
        assert_eq!(htf_forward(t, coeffs.as_ptr(), a.as_mut_ptr()), HtfStatus::Ok);
        assert_eq!(
            htf_forward(loaded, coeffs.as_ptr(), b.as_mut_ptr()),
            HtfStatus::Ok
        );
        assert_eq!(a, b);

        htf_free(t);
        htf_free(loaded);
    }
}

#[test]
fn io_failures_map_to_io_status() {
    let missing = CString::new("/nonexistent-dir/zzz/factors.htf1").unwrap();
    let mut handle: *mut HtfTransform = ptr::null_mut();
    unsafe {
        assert_eq!(
            htf_load(missing.as_ptr(), &mut handle),
            HtfStatus::IoError
        );
        assert!(handle.is_null());
        let t = build(4);
        assert_eq!(htf_save(t, missing.as_ptr()), HtfStatus::IoError);
        htf_free(t);
    }
}
