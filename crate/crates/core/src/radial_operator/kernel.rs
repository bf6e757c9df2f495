use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;

use super::mean::integrate_against_kernel;

/// ∫_{-1}^{1} (1-u²)^{n/2} du via J_{-1} = π, J_0 = 2, J_n = n/(n+1) J_{n-2}.
fn sphere_moment(n: i32) -> f64 {
    match n {
        -1 => PI,
        0 => 2.0,
        n => (n as f64) / (n as f64 + 1.0) * sphere_moment(n - 2),
    }
}

/// c_d with A_t f(x) = c_d ∫_{|r-t|}^{r+t} K_t(r,s) f₀(s) ds; c_d = 2^{d-1} / J_{d-3}.
pub fn normalization_constant(d: u32) -> f64 {
    assert!(d >= 2, "dimension must be at least 2");
    2f64.powi(d as i32 - 1) / sphere_moment(d as i32 - 3)
}

pub(crate) fn check_dimension(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::param("d", format!("dimension {d} must be at least 2")));
    }
    if d > 64 {
        return Err(Error::param("d", format!("dimension {d} is unreasonably large")));
    }
    Ok(())
}

/// K_t(r,s) = [√((r+t)²-s²)·√(s²-(r-t)²) / (4rt)]^{d-3} · s / (4rt).
pub fn kernel(d: u32, t: f64, r: f64, s: f64) -> Result<f64> {
    check_dimension(d)?;
    if !(r > 0.0 && t > 0.0 && r.is_finite() && t.is_finite()) {
        return Err(Error::Domain(format!("kernel needs r, t > 0 (r = {r}, t = {t})")));
    }
    let a = (r - t).abs();
    let b = r + t;
    if !(s >= a && s <= b) {
        return Err(Error::Domain(format!("s = {s} outside [{a}, {b}]")));
    }
    let four_rt = 4.0 * r * t;
    if d == 2 {
        if s == 0.0 {
            return Ok(1.0 / b);
        }
        if s == a || s == b {
            return Err(Error::Singularity(format!("d = 2 kernel is singular at s = {s}")));
        }
    }
    let p = (b - s) * (b + s) * (s - a) * (s + a);
    let e = (d as f64 - 3.0) / 2.0;
    Ok(p.powf(e) * s / four_rt.powi(d as i32 - 2))
}

/// 1 / ∫ K_t(r,s) ds, computed numerically. Agrees with
/// [`normalization_constant`] to quadrature accuracy.
pub fn calibrate_normalization(d: u32, r: f64, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_dimension(d)?;
    if !(r > 0.0 && t > 0.0) {
        return Err(Error::Domain(format!("calibration needs r, t > 0 (r = {r}, t = {t})")));
    }
    let integral = integrate_against_kernel(d, r, t, &[(0.0, f64::INFINITY)], &|_, _| 1.0, quad)?;
    Ok(1.0 / integral.value)
}
