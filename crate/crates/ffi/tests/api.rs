use std::ffi::{CStr, CString};
use std::ptr;

use radmax_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = radmax_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn set_round_trip() {
    unsafe {
        let mut set = ptr::null_mut();
        assert_eq!(radmax_set_parse(c("cantor(1/3, 3)").as_ptr(), &mut set), RadmaxStatus::Ok);
        let mut n = 0usize;
        assert_eq!(radmax_set_interval_count(set, &mut n), RadmaxStatus::Ok);
        assert_eq!(n, 8);
        let mut cover = 0u64;
        assert_eq!(radmax_set_covering_number(set, c("1/27").as_ptr(), &mut cover), RadmaxStatus::Ok);
        assert_eq!(cover, 8);
        let mut w = 0.0;
        assert_eq!(radmax_set_neighborhood_measure(set, 0, &mut w), RadmaxStatus::Ok);
        assert!((w - 4.0).abs() < 1e-12);
        assert_eq!(radmax_set_neighborhood_measure(set, -1, &mut w), RadmaxStatus::InvalidArgument);
        radmax_set_free(set);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut set = ptr::null_mut();
        assert_eq!(radmax_set_parse(c("cantor(2, 3)").as_ptr(), &mut set), RadmaxStatus::InvalidArgument);
        assert!(set.is_null());
        assert!(last_error().contains("alpha"), "{}", last_error());
        assert_eq!(radmax_set_parse(ptr::null(), &mut set), RadmaxStatus::NullPointer);
        assert_eq!(radmax_set_parse(c("nonsense(").as_ptr(), &mut set), RadmaxStatus::Parse);
        assert_eq!(radmax_set_parse(c("interval").as_ptr(), ptr::null_mut()), RadmaxStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(radmax_set_parse(bad.as_ptr().cast(), &mut set), RadmaxStatus::InvalidUtf8);
        radmax_set_free(ptr::null_mut());
    }
}

#[test]
fn spherical_mean_closed_form() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(radmax_profile_parse(c("pow(1,1,0,0,8)").as_ptr(), &mut f), RadmaxStatus::Ok);
        let mut v = 0.0;
        assert_eq!(radmax_spherical_mean(3, f, 1.0, 1.0, 0.0, &mut v), RadmaxStatus::Ok);
        assert!((v - 4.0 / 3.0).abs() < 1e-9);
        assert_eq!(radmax_spherical_mean(1, f, 1.0, 1.0, 0.0, &mut v), RadmaxStatus::InvalidArgument);
        radmax_profile_free(f);
    }
}

#[test]
fn regions() {
    unsafe {
        let mut reg = ptr::null_mut();
        let one = c("1");
        assert_eq!(radmax_region_radial(3, one.as_ptr(), one.as_ptr(), one.as_ptr(), 0, &mut reg), RadmaxStatus::Ok);
        let mut n = 0usize;
        radmax_region_vertex_count(reg, &mut n);
        assert_eq!(n, 3);
        let (mut x, mut y) = (0.0, 0.0);
        assert_eq!(radmax_region_vertex(reg, 1, &mut x, &mut y), RadmaxStatus::Ok);
        assert!((x - 2.0 / 3.0).abs() < 1e-15 && (y - 2.0 / 9.0).abs() < 1e-15);
        assert_eq!(radmax_region_vertex(reg, 3, &mut x, &mut y), RadmaxStatus::OutOfRange);
        let mut m = RadmaxMembership::Outside;
        assert_eq!(radmax_region_membership(reg, c("2").as_ptr(), c("4").as_ptr(), &mut m), RadmaxStatus::Ok);
        assert_eq!(m, RadmaxMembership::Interior);
        assert_eq!(radmax_region_membership(reg, c("1").as_ptr(), c("inf").as_ptr(), &mut m), RadmaxStatus::Ok);
        assert_eq!(m, RadmaxMembership::Outside);
        radmax_region_free(reg);

        let (b, g, gs) = (c("1/2"), c("3/4"), c("1"));
        let st = radmax_region_radial(2, b.as_ptr(), g.as_ptr(), gs.as_ptr(), RADMAX_FLAG_QUASI_ASSOUAD_REGULAR, &mut reg);
        assert_eq!(st, RadmaxStatus::Consistency);
        assert_eq!(radmax_region_radial(2, b.as_ptr(), g.as_ptr(), gs.as_ptr(), 64, &mut reg), RadmaxStatus::InvalidArgument);

        let (b, g) = (c("1/3"), c("2/3"));
        assert_eq!(radmax_region_polygon(RadmaxRegionKind::Q, 2, b.as_ptr(), g.as_ptr(), &mut reg), RadmaxStatus::Ok);
        radmax_region_vertex_count(reg, &mut n);
        assert_eq!(n, 3);
        radmax_region_free(reg);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(radmax_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
