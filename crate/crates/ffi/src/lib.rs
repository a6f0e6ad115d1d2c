//! C interface to `slitcarpet`.
//!
//! Objects cross the boundary as opaque handles, created by `*_parse` and by
//! operations returning new objects, and released with the matching
//! `*_free`. Every fallible
//! call returns a [`SlitcarpetStatus`] and writes its result through an out
//! pointer; on failure the message is kept per thread and can be read with
//! [`slitcarpet_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use slitcarpet::geodesics::{distance_double, distance_level};
use slitcarpet::measure::ball_mass;
use slitcarpet::modulus::{conductance, Direction};
use slitcarpet::symmetry::{cohopf_check, qs_apply, qs_compose, qs_inverse, LFunction, QSElement};
use slitcarpet::{carpet::slits_up_to, CarpetPoint, Error};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlitcarpetStatus {
    Ok = 0,
    Domain = 1,
    Parse = 2,
    InvalidTag = 3,
    LevelOrder = 4,
    GridMisaligned = 5,
    NotConverged = 6,
    Verification = 7,
    InvalidLFunction = 8,
    Overflow = 9,
    Io = 10,
    NullPointer = 11,
    Utf8 = 12,
    BufferTooSmall = 13,
    Panic = 14,
}

/// Potential problem for [`slitcarpet_conductance`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlitcarpetDirection {
    LeftRight = 0,
    TopBottom = 1,
}

/// A point of `Q̄_n` or of its double.
pub struct SlitcarpetPoint(CarpetPoint);

/// A piecewise-linear shear function.
pub struct SlitcarpetLFunction(LFunction);

/// A quasisymmetry `ι ∘ shear(h)` of the double.
pub struct SlitcarpetElement(QSElement);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> SlitcarpetStatus {
    match e {
        Error::Domain(_) => SlitcarpetStatus::Domain,
        Error::Parse(_) => SlitcarpetStatus::Parse,
        Error::InvalidTag(_) => SlitcarpetStatus::InvalidTag,
        Error::LevelOrder { .. } => SlitcarpetStatus::LevelOrder,
        Error::GridMisaligned { .. } => SlitcarpetStatus::GridMisaligned,
        Error::NotConverged { .. } => SlitcarpetStatus::NotConverged,
        Error::Verification(_) => SlitcarpetStatus::Verification,
        Error::InvalidLFunction(_) => SlitcarpetStatus::InvalidLFunction,
        Error::Overflow(_) => SlitcarpetStatus::Overflow,
        Error::Io(_) => SlitcarpetStatus::Io,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), SlitcarpetStatus>) -> SlitcarpetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SlitcarpetStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            SlitcarpetStatus::Panic
        }
    }
}

fn lib<T>(r: slitcarpet::Result<T>) -> Result<T, SlitcarpetStatus> {
    r.map_err(|e| {
        let s = status_of(&e);
        set_error(e.to_string());
        s
    })
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, SlitcarpetStatus> {
    if s.is_null() {
        set_error("null string".into());
        return Err(SlitcarpetStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not UTF-8".into());
        SlitcarpetStatus::Utf8
    })
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, SlitcarpetStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle".into());
        SlitcarpetStatus::NullPointer
    })
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), SlitcarpetStatus> {
    if out.is_null() {
        set_error("null output pointer".into());
        return Err(SlitcarpetStatus::NullPointer);
    }
    out.write(v);
    Ok(())
}

/// Copies `s` with a terminating NUL; fails if it does not fit.
unsafe fn copy_out(s: &str, buf: *mut c_char, len: usize) -> Result<(), SlitcarpetStatus> {
    if buf.is_null() {
        set_error("null buffer".into());
        return Err(SlitcarpetStatus::NullPointer);
    }
    if s.len() + 1 > len {
        set_error(format!("buffer of {len} bytes, {} needed", s.len() + 1));
        return Err(SlitcarpetStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(s.as_ptr().cast::<c_char>(), buf, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

/// Version string, static and NUL-terminated.
#[no_mangle]
pub extern "C" fn slitcarpet_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf`. Returns the
/// length of the full message; nothing is written if `len` is too small.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && e.len() < len {
            let _ = copy_out(&e, buf, len);
        }
        e.len()
    })
}

/// Number of slits of generation at most `level`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_slit_count(level: u32, out: *mut usize) -> SlitcarpetStatus {
    guard(|| {
        if level > 20 {
            set_error(format!("level {level} exceeds 20"));
            return Err(SlitcarpetStatus::Domain);
        }
        put(out, slits_up_to(level).len())
    })
}

/// Parses `x,y[,L|R][,front|back]`.
///
/// # Safety
/// `s` must be a NUL-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_point_parse(
    s: *const c_char,
    out: *mut *mut SlitcarpetPoint,
) -> SlitcarpetStatus {
    guard(|| {
        let p = lib(text(s)?.parse::<CarpetPoint>())?;
        put(out, Box::into_raw(Box::new(SlitcarpetPoint(p))))
    })
}

/// # Safety
/// `p` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_point_free(p: *mut SlitcarpetPoint) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Coordinates as doubles.
///
/// # Safety
/// `p` must be a live handle; `x` and `y` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_point_coords(
    p: *const SlitcarpetPoint,
    x: *mut f64,
    y: *mut f64,
) -> SlitcarpetStatus {
    guard(|| {
        let (a, b) = get(p)?.0.xy();
        put(x, a)?;
        put(y, b)
    })
}

/// Text form `x y [L|R] [front|back]` into `buf`.
///
/// # Safety
/// `p` must be a live handle and `buf` valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_point_format(
    p: *const SlitcarpetPoint,
    buf: *mut c_char,
    len: usize,
) -> SlitcarpetStatus {
    guard(|| copy_out(&get(p)?.0.to_string(), buf, len))
}

/// Geodesic distance in `Q̄_n`.
///
/// # Safety
/// `p` and `q` must be live handles; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_distance_level(
    n: u32,
    p: *const SlitcarpetPoint,
    q: *const SlitcarpetPoint,
    out: *mut f64,
) -> SlitcarpetStatus {
    guard(|| put(out, lib(distance_level(n, &get(p)?.0, &get(q)?.0))?.0))
}

/// Geodesic distance in the double of `Q̄_n`.
///
/// # Safety
/// `p` and `q` must be live handles; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_distance_double(
    n: u32,
    p: *const SlitcarpetPoint,
    q: *const SlitcarpetPoint,
    out: *mut f64,
) -> SlitcarpetStatus {
    guard(|| put(out, lib(distance_double(n, &get(p)?.0, &get(q)?.0))?.0))
}

/// Area of the ball `B(p, r)` in `Q̄_n`, counted on grid `g`.
///
/// # Safety
/// `p` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_ball_mass(
    n: u32,
    p: *const SlitcarpetPoint,
    r: f64,
    g: u32,
    out: *mut f64,
) -> SlitcarpetStatus {
    guard(|| put(out, lib(ball_mass(n, &get(p)?.0, r, g))?))
}

/// Effective conductance of the level-`n` network on grid `g`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_conductance(
    n: u32,
    g: u32,
    direction: SlitcarpetDirection,
    out: *mut f64,
) -> SlitcarpetStatus {
    let dir = match direction {
        SlitcarpetDirection::LeftRight => Direction::LR,
        SlitcarpetDirection::TopBottom => Direction::TB,
    };
    guard(|| put(out, lib(conductance(n, g, dir))?))
}

/// Parses `N v0 v1 ... v_{2^N}`.
///
/// # Safety
/// `s` must be a NUL-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_lfunction_parse(
    s: *const c_char,
    out: *mut *mut SlitcarpetLFunction,
) -> SlitcarpetStatus {
    guard(|| {
        let h = lib(text(s)?.parse::<LFunction>())?;
        put(out, Box::into_raw(Box::new(SlitcarpetLFunction(h))))
    })
}

/// # Safety
/// `h` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_lfunction_free(h: *mut SlitcarpetLFunction) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Lipschitz constant.
///
/// # Safety
/// `h` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_lfunction_lip(
    h: *const SlitcarpetLFunction,
    out: *mut f64,
) -> SlitcarpetStatus {
    guard(|| put(out, get(h)?.0.lip().to_f64()))
}

/// Parses `rvf-bits [N v0 ...]`, e.g. `101 2 0 0 0 1/2 0`.
///
/// # Safety
/// `s` must be a NUL-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_element_parse(
    s: *const c_char,
    out: *mut *mut SlitcarpetElement,
) -> SlitcarpetStatus {
    guard(|| {
        let g = lib(text(s)?.parse::<QSElement>())?;
        put(out, Box::into_raw(Box::new(SlitcarpetElement(g))))
    })
}

/// # Safety
/// `g` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_element_free(g: *mut SlitcarpetElement) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Text form of an element into `buf`.
///
/// # Safety
/// `g` must be a live handle and `buf` valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_element_format(
    g: *const SlitcarpetElement,
    buf: *mut c_char,
    len: usize,
) -> SlitcarpetStatus {
    guard(|| {
        let g = &get(g)?.0;
        let shown = QSElement::new(g.iso, g.shear.clone().simplify());
        copy_out(&shown.to_string(), buf, len)
    })
}

/// `a ∘ b` as a new handle.
///
/// # Safety
/// `a` and `b` must be live handles; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_element_compose(
    a: *const SlitcarpetElement,
    b: *const SlitcarpetElement,
    out: *mut *mut SlitcarpetElement,
) -> SlitcarpetStatus {
    guard(|| {
        let c = lib(qs_compose(&get(a)?.0, &get(b)?.0))?;
        put(out, Box::into_raw(Box::new(SlitcarpetElement(c))))
    })
}

/// Inverse as a new handle.
///
/// # Safety
/// `g` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_element_inverse(
    g: *const SlitcarpetElement,
    out: *mut *mut SlitcarpetElement,
) -> SlitcarpetStatus {
    guard(|| {
        let c = lib(qs_inverse(&get(g)?.0))?;
        put(out, Box::into_raw(Box::new(SlitcarpetElement(c))))
    })
}

/// Image of a point of the double as a new handle.
///
/// # Safety
/// `g` and `p` must be live handles; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_element_apply(
    g: *const SlitcarpetElement,
    p: *const SlitcarpetPoint,
    out: *mut *mut SlitcarpetPoint,
) -> SlitcarpetStatus {
    guard(|| {
        let q = lib(qs_apply(&get(g)?.0, &get(p)?.0))?;
        put(out, Box::into_raw(Box::new(SlitcarpetPoint(q))))
    })
}

/// Whether the element permutes the level-`level` slits of the double.
///
/// # Safety
/// `g` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn slitcarpet_cohopf_check(
    g: *const SlitcarpetElement,
    level: u32,
    out: *mut bool,
) -> SlitcarpetStatus {
    guard(|| {
        if level > 6 {
            set_error(format!("level {level} exceeds 6"));
            return Err(SlitcarpetStatus::Domain);
        }
        put(out, lib(cohopf_check(&get(g)?.0, level))?)
    })
}
