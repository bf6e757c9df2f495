use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fractal_set::FractalSet;
use crate::quadrature::{integrate_panels, QuadResult, QuadratureSpec};
use crate::rational::{pow2, qmin, to_f64, Q};

use super::kernel::{check_dimension, normalization_constant};
use super::profile::RadialProfile;

/// Ratio between successive extra breakpoints on pieces spanning many
/// decades (e.g. s^{1-d} near the origin).
const GEOMETRIC_SPLIT: f64 = 4.0;

/// Where an integration point sits relative to the ends of [A, B]:
/// `s`, `s - A` and `B - s`, the differences computed without cancellation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SPoint {
    pub s: f64,
    pub from_a: f64,
    pub to_b: f64,
}

/// ∫_A^B K_t(r,s) w(s) ds over the parts of [A,B] covered by `supports`,
/// with s = A + u² on [A, M] and s = B - v² on [M, B], M = (A+B)/2.
/// `w` receives the piece index and the point.
pub(crate) fn integrate_against_kernel(
    d: u32,
    r: f64,
    t: f64,
    supports: &[(f64, f64)],
    w: &(dyn Fn(usize, SPoint) -> f64 + Sync),
    quad: &QuadratureSpec,
) -> Result<QuadResult> {
    let a = (r - t).abs();
    let b = r + t;
    let m = r.min(t);
    let four_rt = 4.0 * r * t;
    let scale = four_rt.powi(d as i32 - 2);
    let e = (d as f64 - 3.0) / 2.0;
    let dm2 = d as i32 - 2;

    // K·ds = 2·u^{d-2}·[(B-s)(B+s)(s+A)]^{(d-3)/2}·s/(4rt)^{d-2} du with s = A+u²
    let lower = |u: f64, which: usize| -> f64 {
        let from_a = u * u;
        let s = a + from_a;
        let to_b = b - s;
        let rest = to_b * (b + s) * (s + a);
        let k = 2.0 * u.powi(dm2) * rest.powf(e) * s / scale;
        if k == 0.0 {
            return 0.0;
        }
        k * w(which, SPoint { s, from_a, to_b })
    };
    let upper = |v: f64, which: usize| -> f64 {
        let to_b = v * v;
        let s = b - to_b;
        let from_a = s - a;
        let rest = (b + s) * from_a * (s + a);
        let k = 2.0 * v.powi(dm2) * rest.powf(e) * s / scale;
        if k == 0.0 {
            return 0.0;
        }
        k * w(which, SPoint { s, from_a, to_b })
    };

    let mut lower_panels: Vec<(f64, f64, usize)> = Vec::new();
    let mut upper_panels: Vec<(f64, f64, usize)> = Vec::new();
    for (idx, &(lo, hi)) in supports.iter().enumerate() {
        // lower half [A, M]
        let l0 = lo.max(a);
        let l1 = hi.min(a + m);
        if l1 > l0 {
            for (x0, x1) in split_points(l0, l1) {
                lower_panels.push(((x0 - a).max(0.0).sqrt(), (x1 - a).max(0.0).sqrt(), idx));
            }
        }
        // upper half [M, B]
        let h0 = lo.max(a + m);
        let h1 = hi.min(b);
        if h1 > h0 {
            for (x0, x1) in split_points(h0, h1) {
                upper_panels.push(((b - x1).max(0.0).sqrt(), (b - x0).max(0.0).sqrt(), idx));
            }
        }
    }
    let half = QuadratureSpec { abs_tol: quad.abs_tol / 2.0, ..*quad };
    let run = |panels: &[(f64, f64, usize)], g: &dyn Fn(f64, usize) -> f64| -> Result<QuadResult> {
        let mut total = QuadResult { value: 0.0, error: 0.0, evaluations: 0 };
        // group consecutive panels with the same support index
        let mut i = 0;
        while i < panels.len() {
            let idx = panels[i].2;
            let mut j = i;
            let mut group = Vec::new();
            while j < panels.len() && panels[j].2 == idx {
                group.push((panels[j].0, panels[j].1));
                j += 1;
            }
            let r = integrate_panels(|x| g(x, idx), &group, &half)?;
            total.value += r.value;
            total.error += r.error;
            total.evaluations += r.evaluations;
            i = j;
        }
        Ok(total)
    };
    let lo_res = run(&lower_panels, &lower)?;
    let up_res = run(&upper_panels, &upper)?;
    Ok(QuadResult {
        value: lo_res.value + up_res.value,
        error: lo_res.error + up_res.error,
        evaluations: lo_res.evaluations + up_res.evaluations,
    })
}

/// Split [x0, x1] at s = 1 and geometrically when it spans many decades.
fn split_points(x0: f64, x1: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![x0];
    if x0 > 0.0 && x1 / x0 > 4.0 * GEOMETRIC_SPLIT {
        let mut c = x0 * GEOMETRIC_SPLIT;
        while c < x1 / GEOMETRIC_SPLIT.sqrt() && cuts.len() < 400 {
            cuts.push(c);
            c *= GEOMETRIC_SPLIT;
        }
    }
    if x0 < 1.0 && x1 > 1.0 {
        cuts.push(1.0);
        cuts.sort_by(f64::total_cmp);
    }
    cuts.push(x1);
    cuts.windows(2).filter(|w| w[1] > w[0]).map(|w| (w[0], w[1])).collect()
}

fn check_radii(r: f64, t: f64) -> Result<()> {
    if !(r >= 0.0 && t >= 0.0 && r.is_finite() && t.is_finite()) {
        return Err(Error::Domain(format!("radii must be finite and non-negative (r = {r}, t = {t})")));
    }
    Ok(())
}

/// A_t f(x) at |x| = r with its quadrature error estimate.
pub fn spherical_mean_with_error(
    d: u32,
    f: &RadialProfile,
    r: f64,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<QuadResult> {
    check_dimension(d)?;
    check_radii(r, t)?;
    quad.validate()?;
    if r == 0.0 || t == 0.0 {
        return Ok(QuadResult { value: f.eval(r + t), error: 0.0, evaluations: 1 });
    }
    let pieces = f.pieces();
    let supports: Vec<(f64, f64)> = pieces.iter().map(|p| (p.lo_f64(), p.hi_f64())).collect();
    let res = integrate_against_kernel(d, r, t, &supports, &|i, p| pieces[i].eval(p.s), quad)?;
    let c = normalization_constant(d);
    Ok(QuadResult { value: c * res.value, error: c * res.error, evaluations: res.evaluations })
}

/// A_t f(x) at |x| = r.
pub fn spherical_mean(d: u32, f: &RadialProfile, r: f64, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    spherical_mean_with_error(d, f, r, t, quad).map(|q| q.value)
}

/// Finite set of dilations used to evaluate the supremum over E.
#[derive(Debug, Clone)]
pub struct DilationGrid {
    points: Vec<f64>,
    /// Component of E containing each point, for local refinement.
    brackets: Vec<Option<(f64, f64)>>,
    spacing: f64,
}

impl DilationGrid {
    /// Default spacing: the finer of the set's resolution and 2^{-12}.
    pub fn default_spacing(e: &FractalSet) -> Q {
        let base = pow2(-12);
        match e.resolution() {
            Some(r) => qmin(&r, &base),
            None => base,
        }
    }

    pub fn from_set(e: &FractalSet, spacing: &Q) -> Result<Self> {
        if *spacing <= Q::from_integer(0.into()) {
            return Err(Error::InvalidScale(format!("grid spacing {spacing} must be positive")));
        }
        let pts = e.grid_points(spacing);
        let brackets = pts
            .iter()
            .map(|p| {
                e.component_of(p)
                    .filter(|iv| !iv.is_point())
                    .map(|iv| (to_f64(&iv.lo), to_f64(&iv.hi)))
            })
            .collect();
        Ok(DilationGrid { points: pts.iter().map(to_f64).collect(), brackets, spacing: to_f64(spacing) })
    }

    /// Fixed dilations with no refinement (witness evaluations).
    pub fn from_points(points: &[f64]) -> Result<Self> {
        if points.is_empty() || points.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::param("dilations", "need a non-empty list of positive dilations"));
        }
        Ok(DilationGrid { points: points.to_vec(), brackets: vec![None; points.len()], spacing: 0.0 })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Points restricted to a predicate, keeping brackets.
    pub fn filtered(&self, keep: impl Fn(f64) -> bool) -> DilationGrid {
        let mut points = Vec::new();
        let mut brackets = Vec::new();
        for (p, b) in self.points.iter().zip(&self.brackets) {
            if keep(*p) {
                points.push(*p);
                brackets.push(*b);
            }
        }
        DilationGrid { points, brackets, spacing: self.spacing }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximalValue {
    /// sup_t |A_t f(r)| after refinement.
    pub value: f64,
    pub t_max: f64,
    /// Maximum over the grid alone; `value - grid_value` is the grid slack.
    pub grid_value: f64,
}

const GOLDEN_STEPS: usize = 40;

/// max over the grid of |A_t f(r)|, then golden-section refinement within
/// one grid spacing of the best grid point.
pub fn maximal_value(
    d: u32,
    f: &RadialProfile,
    r: f64,
    grid: &DilationGrid,
    quad: &QuadratureSpec,
) -> Result<MaximalValue> {
    if grid.is_empty() {
        return Err(Error::param("grid", "empty dilation grid"));
    }
    let vals: Vec<f64> = grid
        .points
        .par_iter()
        .map(|&t| spherical_mean(d, f, r, t, quad).map(f64::abs))
        .collect::<Result<_>>()?;
    let mut best = 0usize;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[best] {
            best = i;
        }
    }
    let grid_value = vals[best];
    let mut out = MaximalValue { value: grid_value, t_max: grid.points[best], grid_value };
    if let Some((lo, hi)) = grid.brackets[best] {
        let t0 = grid.points[best];
        let mut a = (t0 - grid.spacing).max(lo);
        let mut b = (t0 + grid.spacing).min(hi);
        if b > a {
            let g = |t: f64| spherical_mean(d, f, r, t, quad).map(f64::abs);
            let phi = (5f64.sqrt() - 1.0) / 2.0;
            let mut x1 = b - phi * (b - a);
            let mut x2 = a + phi * (b - a);
            let mut f1 = g(x1)?;
            let mut f2 = g(x2)?;
            for _ in 0..GOLDEN_STEPS {
                if f1 >= f2 {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - phi * (b - a);
                    f1 = g(x1)?;
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + phi * (b - a);
                    f2 = g(x2)?;
                }
                for (x, v) in [(x1, f1), (x2, f2)] {
                    if v > out.value {
                        out.value = v;
                        out.t_max = x;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Number of grid points a set would produce at the given spacing.
pub fn grid_size(e: &FractalSet, spacing: &Q) -> usize {
    e.intervals()
        .iter()
        .map(|iv| {
            if iv.is_point() {
                1
            } else {
                crate::rational::ceil_div(&iv.len(), spacing).to_usize().unwrap_or(1) + 1
            }
        })
        .sum()
}
