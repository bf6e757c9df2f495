use std::fmt;

use crate::error::{Error, Result};
use crate::fractal_set::FractalSet;
use crate::quadrature::{integrate_panels, QuadratureSpec};
use crate::rational::qi;

use super::kernel::check_dimension;
use super::mean::{DilationGrid, SPoint};
use super::profile::RadialProfile;

/// Operators of the pointwise decomposition of M_E.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    /// 𝔐_{E,p} for d ≥ 3
    Main,
    R1,
    R2,
    /// 𝔐_{E,p} for d = 2 (singular at the inner endpoint)
    Main2D,
    /// 𝔐̃_{E,p} for d = 2 (singular at the outer endpoint)
    MainTilde2D,
    R1E,
    R2E,
    R3E,
    R4E,
    /// U f for the indicator estimate in the plane
    U,
    /// R f for the indicator estimate in the plane
    R,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Component::Main => "main",
            Component::R1 => "r1",
            Component::R2 => "r2",
            Component::Main2D => "main_2d",
            Component::MainTilde2D => "main_tilde_2d",
            Component::R1E => "r1e",
            Component::R2E => "r2e",
            Component::R3E => "r3e",
            Component::R4E => "r4e",
            Component::U => "u",
            Component::R => "r",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentValues {
    pub r: f64,
    pub values: Vec<(Component, f64)>,
}

impl ComponentValues {
    pub fn get(&self, c: Component) -> Option<f64> {
        self.values.iter().find(|(k, _)| *k == c).map(|(_, v)| *v)
    }

    pub fn total(&self) -> f64 {
        self.values.iter().map(|(_, v)| v).sum()
    }
}

/// ∫_a^b h(s) ds restricted to the support of f, with s = a + u² on the
/// lower half and s = b - v² on the upper half. `h` gets the piece index.
fn integrate_sqrt_ends(
    f: &RadialProfile,
    a: f64,
    b: f64,
    h: &dyn Fn(usize, SPoint) -> f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !(b > a) {
        return Ok(0.0);
    }
    let mid = 0.5 * (a + b);
    let mut total = 0.0;
    for (idx, piece) in f.pieces().iter().enumerate() {
        let (lo, hi) = (piece.lo_f64(), piece.hi_f64());
        let l0 = lo.max(a);
        let l1 = hi.min(mid);
        if l1 > l0 {
            let panel = ((l0 - a).max(0.0).sqrt(), (l1 - a).max(0.0).sqrt());
            let g = |u: f64| {
                let from_a = u * u;
                let s = a + from_a;
                2.0 * u * h(idx, SPoint { s, from_a, to_b: b - s })
            };
            total += integrate_panels(g, &[panel], quad)?.value;
        }
        let h0 = lo.max(mid);
        let h1 = hi.min(b);
        if h1 > h0 {
            let panel = ((b - h1).max(0.0).sqrt(), (b - h0).max(0.0).sqrt());
            let g = |v: f64| {
                let to_b = v * v;
                let s = b - to_b;
                2.0 * v * h(idx, SPoint { s, from_a: s - a, to_b })
            };
            total += integrate_panels(g, &[panel], quad)?.value;
        }
    }
    Ok(total)
}

fn sup_over<F: Fn(f64) -> Result<f64>>(grid: &DilationGrid, keep: impl Fn(f64) -> bool, g: F) -> Result<f64> {
    let mut best = 0.0f64;
    for &t in grid.points() {
        if keep(t) {
            best = best.max(g(t)?);
        }
    }
    Ok(best)
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::param("p", format!("{p} must be at least 1")));
    }
    Ok(())
}

/// 𝔐_{E,p}, R₁ and R₂ at radius r (d ≥ 3). `e_grid` samples E, `unit_grid`
/// samples [1,2].
pub fn higher_components(
    d: u32,
    e_grid: &DilationGrid,
    unit_grid: &DilationGrid,
    f: &RadialProfile,
    p: f64,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<ComponentValues> {
    check_dimension(d)?;
    check_p(p)?;
    if d < 3 {
        return Err(Error::param("d", "the three-part decomposition needs d ≥ 3"));
    }
    let pieces = f.pieces();
    let dm1 = d as f64 - 1.0;
    let inv_pp = 1.0 - 1.0 / p;
    let main = if r > 2.0 / 3.0 && r < 4.0 {
        sup_over(e_grid, |t| r / 2.0 < t && t < 1.5 * r, |t| {
            let w = |i: usize, x: SPoint| {
                x.s.powf(dm1 * inv_pp - 1.0) * (pieces[i].eval(x.s) * x.s.powf(dm1 / p)).abs()
            };
            integrate_sqrt_ends(f, (r - t).abs(), r + t, &w, quad)
        })?
    } else {
        0.0
    };
    let plain = |i: usize, x: SPoint| pieces[i].eval(x.s).abs();
    let r1 = if r >= 2.0 {
        sup_over(unit_grid, |t| t <= r / 2.0, |t| integrate_sqrt_ends(f, r - t, r + t, &plain, quad))?
    } else {
        0.0
    };
    let r2 = if r < 4.0 / 3.0 {
        sup_over(unit_grid, |t| t >= 1.5 * r, |t| {
            Ok(integrate_sqrt_ends(f, t - r, t + r, &plain, quad)? / r)
        })?
    } else {
        0.0
    };
    Ok(ComponentValues {
        r,
        values: vec![(Component::Main, main), (Component::R1, r1), (Component::R2, r2)],
    })
}

/// 𝔐_{E,p}, 𝔐̃_{E,p} and R_{1..4,E} at radius r (d = 2).
pub fn circular_components(
    e_grid: &DilationGrid,
    f: &RadialProfile,
    p: f64,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<ComponentValues> {
    check_p(p)?;
    let pieces = f.pieces();
    let g_abs = |i: usize, s: f64| (pieces[i].eval(s) * s.powf(1.0 / p)).abs();
    let f_abs = |i: usize, s: f64| pieces[i].eval(s).abs();
    let in_main = r > 2.0 / 3.0 && r < 4.0;
    let near = |t: f64| r / 2.0 < t && t < 1.5 * r;
    let main = if in_main {
        sup_over(e_grid, near, |t| {
            let w = |i: usize, x: SPoint| x.s.powf(0.5 - 1.0 / p) / x.from_a.sqrt() * g_abs(i, x.s);
            integrate_sqrt_ends(f, (r - t).abs(), r + t, &w, quad)
        })?
    } else {
        0.0
    };
    let main_tilde = if in_main {
        sup_over(e_grid, near, |t| {
            let w = |i: usize, x: SPoint| x.s.powf(0.5 - 1.0 / p) / x.to_b.sqrt() * g_abs(i, x.s);
            integrate_sqrt_ends(f, (r - t).abs(), r + t, &w, quad)
        })?
    } else {
        0.0
    };
    let inner = |i: usize, x: SPoint| f_abs(i, x.s) / x.from_a.sqrt();
    let outer = |i: usize, x: SPoint| f_abs(i, x.s) / x.to_b.sqrt();
    let (r1, r2) = if r >= 2.0 {
        (
            sup_over(e_grid, |t| t <= r / 2.0, |t| integrate_sqrt_ends(f, r - t, r, &inner, quad))?,
            sup_over(e_grid, |t| t <= r / 2.0, |t| integrate_sqrt_ends(f, r, r + t, &outer, quad))?,
        )
    } else {
        (0.0, 0.0)
    };
    let (r3, r4) = if r < 4.0 / 3.0 && r > 0.0 {
        let k = r.powf(-0.5);
        (
            sup_over(e_grid, |t| t >= 1.5 * r, |t| Ok(k * integrate_sqrt_ends(f, t - r, t, &inner, quad)?))?,
            sup_over(e_grid, |t| t >= 1.5 * r, |t| Ok(k * integrate_sqrt_ends(f, t, t + r, &outer, quad)?))?,
        )
    } else {
        (0.0, 0.0)
    };
    Ok(ComponentValues {
        r,
        values: vec![
            (Component::Main2D, main),
            (Component::MainTilde2D, main_tilde),
            (Component::R1E, r1),
            (Component::R2E, r2),
            (Component::R3E, r3),
            (Component::R4E, r4),
        ],
    })
}

/// U f and R f at radius r, sup over t in `unit_grid` ⊂ [1,2].
pub fn circular_indicator_components(
    unit_grid: &DilationGrid,
    f: &RadialProfile,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<ComponentValues> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    let pieces = f.pieces();
    let zf = |i: usize, x: SPoint| x.s * pieces[i].eval(x.s);
    let pf = |i: usize, x: SPoint| pieces[i].eval(x.s);
    let u = if r > 0.5 {
        sup_over(unit_grid, |t| t < 2.0 * r, |t| {
            Ok(integrate_sqrt_ends(f, (r - t).abs(), r + t, &zf, quad)? / r)
        })?
    } else {
        0.0
    };
    let rr = if r <= 1.0 {
        sup_over(unit_grid, |t| t >= 2.0 * r, |t| {
            Ok(integrate_sqrt_ends(f, t - r, t + r, &pf, quad)? / r)
        })?
    } else {
        0.0
    };
    Ok(ComponentValues { r, values: vec![(Component::U, u), (Component::R, rr)] })
}

/// All decomposition components at radius r with grids built from E at
/// its default spacing.
pub fn decomposition_components(
    d: u32,
    e: &FractalSet,
    f: &RadialProfile,
    p: f64,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<ComponentValues> {
    check_dimension(d)?;
    let spacing = DilationGrid::default_spacing(e);
    let e_grid = DilationGrid::from_set(e, &spacing)?;
    if d >= 3 {
        let unit = FractalSet::from_generator(crate::fractal_set::FractalGenerator::FullInterval)?;
        let unit_grid = DilationGrid::from_set(&unit, &crate::rational::pow2(-8).min(spacing))?;
        higher_components(d, &e_grid, &unit_grid, f, p, r, quad)
    } else {
        let mut out = circular_components(&e_grid, f, p, r, quad)?;
        if e.intervals().len() == 1 && e.min() == &qi(1) && e.max() == &qi(2) {
            let extra = circular_indicator_components(&e_grid, f, r, quad)?;
            out.values.extend(extra.values);
        }
        Ok(out)
    }
}
