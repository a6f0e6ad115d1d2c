use std::ffi::{c_char, CStr, CString};
use std::ptr;

use slitcarpet_ffi::*;

fn point(s: &str) -> *mut SlitcarpetPoint {
    let s = CString::new(s).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { slitcarpet_point_parse(s.as_ptr(), &mut p) },
        SlitcarpetStatus::Ok
    );
    p
}

fn element(s: &str) -> *mut SlitcarpetElement {
    let s = CString::new(s).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { slitcarpet_element_parse(s.as_ptr(), &mut g) },
        SlitcarpetStatus::Ok
    );
    g
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe { slitcarpet_last_error(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

fn format_element(g: *const SlitcarpetElement) -> String {
    let mut buf = [0 as c_char; 256];
    assert_eq!(
        unsafe { slitcarpet_element_format(g, buf.as_mut_ptr(), buf.len()) },
        SlitcarpetStatus::Ok
    );
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn version_is_the_package_version() {
    let v = unsafe { CStr::from_ptr(slitcarpet_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn slit_counts() {
    let mut n = 0usize;
    for (level, want) in [(0, 0), (1, 1), (2, 5), (3, 21)] {
        assert_eq!(
            unsafe { slitcarpet_slit_count(level, &mut n) },
            SlitcarpetStatus::Ok
        );
        assert_eq!(n, want);
    }
}

#[test]
fn across_the_central_slit() {
    let p = point("0.5,0.5,L");
    let q = point("0.5,0.5,R");
    let mut d = 0.0;
    assert_eq!(
        unsafe { slitcarpet_distance_level(1, p, q, &mut d) },
        SlitcarpetStatus::Ok
    );
    assert!((d - 0.5).abs() < 1e-12, "{d}");
    let (mut x, mut y) = (0.0, 0.0);
    assert_eq!(
        unsafe { slitcarpet_point_coords(p, &mut x, &mut y) },
        SlitcarpetStatus::Ok
    );
    assert_eq!((x, y), (0.5, 0.5));
    unsafe {
        slitcarpet_point_free(p);
        slitcarpet_point_free(q);
    }
}

#[test]
fn faces_meet_on_the_outer_boundary() {
    let p = point("0.5,0.5,L,front");
    let q = point("0.5,0.5,L,back");
    let mut d = 0.0;
    assert_eq!(
        unsafe { slitcarpet_distance_double(1, p, q, &mut d) },
        SlitcarpetStatus::Ok
    );
    assert!((d - 1.0).abs() < 1e-12, "{d}");
    unsafe {
        slitcarpet_point_free(p);
        slitcarpet_point_free(q);
    }
}

#[test]
fn square_conductance_is_one() {
    let mut c = 0.0;
    let s = unsafe { slitcarpet_conductance(0, 4, SlitcarpetDirection::LeftRight, &mut c) };
    assert_eq!(s, SlitcarpetStatus::Ok);
    assert!((c - 1.0).abs() < 1e-9, "{c}");
}

#[test]
fn parse_errors_are_reported() {
    let s = CString::new("half,0.5").unwrap();
    let mut p = ptr::null_mut();
    let st = unsafe { slitcarpet_point_parse(s.as_ptr(), &mut p) };
    assert_eq!(st, SlitcarpetStatus::Parse);
    assert!(p.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn points_outside_the_square_are_a_domain_error() {
    let p = point("2,0.5");
    let q = point("0.5,0.5");
    let mut d = 0.0;
    let st = unsafe { slitcarpet_distance_level(1, p, q, &mut d) };
    assert_eq!(st, SlitcarpetStatus::Domain);
    unsafe {
        slitcarpet_point_free(p);
        slitcarpet_point_free(q);
    }
}

#[test]
fn invalid_shear_is_rejected() {
    let s = CString::new("2 0 0 1/2 0 0").unwrap();
    let mut h = ptr::null_mut();
    let st = unsafe { slitcarpet_lfunction_parse(s.as_ptr(), &mut h) };
    assert_eq!(st, SlitcarpetStatus::InvalidLFunction);
    assert!(h.is_null());
}

#[test]
fn null_pointers_are_rejected() {
    let mut d = 0.0;
    let st = unsafe { slitcarpet_distance_level(1, ptr::null(), ptr::null(), &mut d) };
    assert_eq!(st, SlitcarpetStatus::NullPointer);
    let st = unsafe { slitcarpet_slit_count(2, ptr::null_mut()) };
    assert_eq!(st, SlitcarpetStatus::NullPointer);
}

#[test]
fn small_buffers_are_rejected() {
    let g = element("101 2 0 0 0 1/2 0");
    let mut buf = [0 as c_char; 4];
    let st = unsafe { slitcarpet_element_format(g, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(st, SlitcarpetStatus::BufferTooSmall);
    unsafe { slitcarpet_element_free(g) };
}

#[test]
fn lfunction_lipschitz() {
    let s = CString::new("2 0 0 0 1/2 0").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { slitcarpet_lfunction_parse(s.as_ptr(), &mut h) },
        SlitcarpetStatus::Ok
    );
    let mut lip = 0.0;
    assert_eq!(
        unsafe { slitcarpet_lfunction_lip(h, &mut lip) },
        SlitcarpetStatus::Ok
    );
    assert_eq!(lip, 2.0);
    unsafe { slitcarpet_lfunction_free(h) };
}

#[test]
fn element_times_inverse_is_identity() {
    let g = element("101 2 0 0 0 1/2 0");
    let mut inv = ptr::null_mut();
    let mut e = ptr::null_mut();
    unsafe {
        assert_eq!(
            slitcarpet_element_inverse(g, &mut inv),
            SlitcarpetStatus::Ok
        );
        assert_eq!(
            slitcarpet_element_compose(g, inv, &mut e),
            SlitcarpetStatus::Ok
        );
    }
    assert!(
        format_element(e).starts_with("000 "),
        "{}",
        format_element(e)
    );
    let p = point("0.375,0.3125,front");
    let mut q = ptr::null_mut();
    let mut d = 1.0;
    unsafe {
        assert_eq!(slitcarpet_element_apply(e, p, &mut q), SlitcarpetStatus::Ok);
        assert_eq!(
            slitcarpet_distance_double(3, p, q, &mut d),
            SlitcarpetStatus::Ok
        );
    }
    assert!(d.abs() < 1e-12);
    unsafe {
        slitcarpet_point_free(p);
        slitcarpet_point_free(q);
        slitcarpet_element_free(g);
        slitcarpet_element_free(inv);
        slitcarpet_element_free(e);
    }
}

#[test]
fn cohopf_for_a_shear() {
    let g = element("000 2 0 0 0 1/2 0");
    let mut ok = false;
    assert_eq!(
        unsafe { slitcarpet_cohopf_check(g, 3, &mut ok) },
        SlitcarpetStatus::Ok
    );
    assert!(ok);
    unsafe { slitcarpet_element_free(g) };
}

#[test]
fn freeing_null_is_harmless() {
    unsafe {
        slitcarpet_point_free(ptr::null_mut());
        slitcarpet_lfunction_free(ptr::null_mut());
        slitcarpet_element_free(ptr::null_mut());
    }
}
