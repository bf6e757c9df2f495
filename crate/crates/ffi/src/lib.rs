//! C ABI over `radmax`.
//!
//! Every fallible call returns a [`RadmaxStatus`]; on failure a message is
//! kept per thread and read with [`radmax_last_error`]. Handles are opaque
//! and must be released with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use radmax::fractal_set::FractalSet;
use radmax::quadrature::QuadratureSpec;
use radmax::radial_operator::{spherical_mean, RadialProfile};
use radmax::rational::{parse_q, parse_q_or_inf, to_f64};
use radmax::type_set_geometry::{membership, radial_type_set, region, Membership, RegionKind, TypeSetFlags, TypeSetRegion};
use radmax::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadmaxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Domain = 5,
    Consistency = 6,
    Precision = 7,
    OutOfRange = 8,
    Panic = 9,
}

/// Where (1/p, 1/q) falls relative to a region.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadmaxMembership {
    Interior = 0,
    BoundaryIncluded = 1,
    BoundaryRestrictedWeak = 2,
    BoundaryExcluded = 3,
    BoundaryUnknown = 4,
    Undetermined = 5,
    Outside = 6,
}

/// Polygon families for [`radmax_region_polygon`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadmaxRegionKind {
    Delta = 0,
    P = 1,
    Q = 2,
    QTilde = 3,
}

/// sup_δ χ_{M,β}(δ) < ∞
pub const RADMAX_FLAG_MINKOWSKI_BOUNDED: u32 = 1;
/// sup_δ χ_{A,γ}(δ) < ∞
pub const RADMAX_FLAG_ASSOUAD_BOUNDED: u32 = 2;
pub const RADMAX_FLAG_QUASI_ASSOUAD_REGULAR: u32 = 4;

/// Dilation set E ⊂ [1,2].
pub struct RadmaxSet {
    inner: FractalSet,
}

/// Radial profile f₀.
pub struct RadmaxProfile {
    inner: RadialProfile,
}

/// Type-set polygon with boundary statuses.
pub struct RadmaxRegion {
    inner: TypeSetRegion,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> RadmaxStatus {
    match err {
        Error::Parse(_) | Error::Config(_) => RadmaxStatus::Parse,
        Error::Parameter { .. } | Error::InvalidScale(_) | Error::InvalidWindow(_) | Error::InsufficientData(_) => {
            RadmaxStatus::InvalidArgument
        }
        Error::Domain(_) | Error::Singularity(_) | Error::DegenerateProbe(_) | Error::Io(_) => RadmaxStatus::Domain,
        Error::Consistency(_) => RadmaxStatus::Consistency,
        Error::Precision(_) => RadmaxStatus::Precision,
    }
}

struct Failure(RadmaxStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RadmaxStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RadmaxStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            RadmaxStatus::Panic
        }
    }
}

fn null(name: &str) -> Failure {
    Failure(RadmaxStatus::NullPointer, format!("`{name}` is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(RadmaxStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(name))
}

unsafe fn in_ref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn radmax_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn radmax_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a generator expression such as `cantor(1/3, 8)`.
///
/// # Safety
/// `expr` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn radmax_set_parse(expr: *const c_char, out: *mut *mut RadmaxSet) -> RadmaxStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let set = FractalSet::parse(read_str(expr, "expr")?)?;
        *out = Box::into_raw(Box::new(RadmaxSet { inner: set }));
        Ok(())
    })
}

/// # Safety
/// `set` must come from [`radmax_set_parse`] and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn radmax_set_free(set: *mut RadmaxSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of maximal intervals (points count as degenerate intervals).
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn radmax_set_interval_count(set: *const RadmaxSet, out: *mut usize) -> RadmaxStatus {
    guard(|| {
        *out_ref(out, "out")? = in_ref(set, "set")?.inner.intervals().len();
        Ok(())
    })
}

/// N(E, δ) with δ given as a rational string (`1/64`, `2^-6`, `0.125`).
///
/// # Safety
/// `set` must be a live handle, `delta` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn radmax_set_covering_number(
    set: *const RadmaxSet,
    delta: *const c_char,
    out: *mut u64,
) -> RadmaxStatus {
    guard(|| {
        let set = in_ref(set, "set")?;
        let delta = parse_q(read_str(delta, "delta")?)?;
        *out_ref(out, "out")? = set.inner.covering_number(&delta)?;
        Ok(())
    })
}

/// |W_n|, rounded to double.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn radmax_set_neighborhood_measure(set: *const RadmaxSet, n: i64, out: *mut f64) -> RadmaxStatus {
    guard(|| {
        let set = in_ref(set, "set")?;
        if n < 0 {
            return Err(Failure(RadmaxStatus::InvalidArgument, format!("n = {n} must be non-negative")));
        }
        *out_ref(out, "out")? = to_f64(&set.inner.neighborhood_measure(n));
        Ok(())
    })
}

/// Parses a profile such as `chi(1,2)` or `pow(1,1,0,0,8) + chi(3,4)`.
///
/// # Safety
/// `expr` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn radmax_profile_parse(expr: *const c_char, out: *mut *mut RadmaxProfile) -> RadmaxStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let f = RadialProfile::parse(read_str(expr, "expr")?)?;
        *out = Box::into_raw(Box::new(RadmaxProfile { inner: f }));
        Ok(())
    })
}

/// # Safety
/// `profile` must come from [`radmax_profile_parse`] and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn radmax_profile_free(profile: *mut RadmaxProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// A_t f(r) in dimension `d`. `rel_tol <= 0` selects the default tolerance.
///
/// # Safety
/// `profile` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn radmax_spherical_mean(
    d: u32,
    profile: *const RadmaxProfile,
    r: f64,
    t: f64,
    rel_tol: f64,
    out: *mut f64,
) -> RadmaxStatus {
    guard(|| {
        let f = in_ref(profile, "profile")?;
        let quad = if rel_tol > 0.0 { QuadratureSpec::with_rel_tol(rel_tol) } else { QuadratureSpec::default() };
        quad.validate()?;
        *out_ref(out, "out")? = spherical_mean(d, &f.inner, r, t, &quad)?;
        Ok(())
    })
}

fn flags_of(bits: u32) -> Result<TypeSetFlags, Failure> {
    let all = RADMAX_FLAG_MINKOWSKI_BOUNDED | RADMAX_FLAG_ASSOUAD_BOUNDED | RADMAX_FLAG_QUASI_ASSOUAD_REGULAR;
    if bits & !all != 0 {
        return Err(Failure(RadmaxStatus::InvalidArgument, format!("unknown flag bits {:#x}", bits & !all)));
    }
    Ok(TypeSetFlags {
        minkowski_char_bounded: bits & RADMAX_FLAG_MINKOWSKI_BOUNDED != 0,
        assouad_char_bounded: bits & RADMAX_FLAG_ASSOUAD_BOUNDED != 0,
        quasi_assouad_regular: bits & RADMAX_FLAG_QUASI_ASSOUAD_REGULAR != 0,
    })
}

/// Radial type set for β ≤ γ ≤ γ* (rational strings) and `RADMAX_FLAG_*` bits.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn radmax_region_radial(
    d: u32,
    beta: *const c_char,
    gamma: *const c_char,
    gamma_star: *const c_char,
    flags: u32,
    out: *mut *mut RadmaxRegion,
) -> RadmaxStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let b = parse_q(read_str(beta, "beta")?)?;
        let g = parse_q(read_str(gamma, "gamma")?)?;
        let gs = parse_q(read_str(gamma_star, "gamma_star")?)?;
        let reg = radial_type_set(d, &b, &g, &gs, &flags_of(flags)?)?;
        *out = Box::into_raw(Box::new(RadmaxRegion { inner: reg }));
        Ok(())
    })
}

/// One of the closed polygons Δ(β), 𝒫(β,γ), 𝒬(β,γ), 𝒬̃(β,γ).
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn radmax_region_polygon(
    kind: RadmaxRegionKind,
    d: u32,
    beta: *const c_char,
    gamma: *const c_char,
    out: *mut *mut RadmaxRegion,
) -> RadmaxStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let b = parse_q(read_str(beta, "beta")?)?;
        let g = parse_q(read_str(gamma, "gamma")?)?;
        let k = match kind {
            RadmaxRegionKind::Delta => RegionKind::Delta,
            RadmaxRegionKind::P => RegionKind::P,
            RadmaxRegionKind::Q => RegionKind::Q,
            RadmaxRegionKind::QTilde => RegionKind::QTilde,
        };
        let reg = region(k, d, &b, &g)?;
        *out = Box::into_raw(Box::new(RadmaxRegion { inner: reg }));
        Ok(())
    })
}

/// # Safety
/// `region` must come from a `radmax_region_*` constructor and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn radmax_region_free(region: *mut RadmaxRegion) {
    if !region.is_null() {
        drop(Box::from_raw(region));
    }
}

/// # Safety
/// `region` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn radmax_region_vertex_count(region: *const RadmaxRegion, out: *mut usize) -> RadmaxStatus {
    guard(|| {
        *out_ref(out, "out")? = in_ref(region, "region")?.inner.vertices.len();
        Ok(())
    })
}

/// Vertex `index` as doubles (1/p, 1/q), counter-clockwise from the origin.
///
/// # Safety
/// `region` must be a live handle; `x` and `y` must be writable.
#[no_mangle]
pub unsafe extern "C" fn radmax_region_vertex(
    region: *const RadmaxRegion,
    index: usize,
    x: *mut f64,
    y: *mut f64,
) -> RadmaxStatus {
    guard(|| {
        let reg = in_ref(region, "region")?;
        let v = reg.inner.vertices.get(index).ok_or_else(|| {
            Failure(RadmaxStatus::OutOfRange, format!("vertex {index} of {}", reg.inner.vertices.len()))
        })?;
        let (vx, vy) = v.to_f64();
        *out_ref(x, "x")? = vx;
        *out_ref(y, "y")? = vy;
        Ok(())
    })
}

/// Classifies the exponent pair (p, q); either may be `inf`.
///
/// # Safety
/// `region` must be a live handle, `p` and `q` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn radmax_region_membership(
    region: *const RadmaxRegion,
    p: *const c_char,
    q: *const c_char,
    out: *mut RadmaxMembership,
) -> RadmaxStatus {
    guard(|| {
        let reg = in_ref(region, "region")?;
        let p = parse_q_or_inf(read_str(p, "p")?)?;
        let q = parse_q_or_inf(read_str(q, "q")?)?;
        let m = membership(&reg.inner, p.as_ref(), q.as_ref())?;
        *out_ref(out, "out")? = match m {
            Membership::Interior => RadmaxMembership::Interior,
            Membership::BoundaryIncluded => RadmaxMembership::BoundaryIncluded,
            Membership::BoundaryRestrictedWeak => RadmaxMembership::BoundaryRestrictedWeak,
            Membership::BoundaryExcluded => RadmaxMembership::BoundaryExcluded,
            Membership::BoundaryUnknown => RadmaxMembership::BoundaryUnknown,
            Membership::Undetermined => RadmaxMembership::Undetermined,
            Membership::Outside => RadmaxMembership::Outside,
        };
        Ok(())
    })
}
