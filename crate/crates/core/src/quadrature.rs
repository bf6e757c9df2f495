//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and refinement caps for one integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections applied to any initial panel.
    pub max_refinement: u32,
    /// Maximum number of live panels.
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-10, abs_tol: 1e-14, max_refinement: 60, max_panels: 4000 }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureSpec { rel_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::param("rel_tol", format!("{} not in (0,1)", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::param("abs_tol", "must be non-negative"));
        }
        if self.max_panels < 2 {
            return Err(Error::param("max_panels", "must be at least 2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    if !resk.is_finite() {
        return Err(Error::Singularity(format!(
            "integrand is not finite on [{a:e}, {b:e}]"
        )));
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * h;
    resabs *= h.abs();
    resasc *= h.abs();
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((value, err))
}

/// ∫ f over the union of the given panels (each [a,b] with a ≤ b).
pub fn integrate_panels<F: Fn(f64) -> f64>(
    f: F,
    panels: &[(f64, f64)],
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut evaluations = 0;
    for &(a, b) in panels {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!("panel [{a}, {b}] is not finite")));
        }
        if b <= a {
            continue;
        }
        let (value, error) = gk15(&f, a, b)?;
        evaluations += 15;
        total += value;
        total_err += error;
        heap.push(Panel { a, b, value, error, depth: 0 });
    }
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= target || heap.is_empty() {
            return Ok(QuadResult { value: total, error: total_err, evaluations });
        }
        let worst = heap.pop().unwrap();
        if worst.depth >= spec.max_refinement || heap.len() + 2 > spec.max_panels {
            return Err(Error::Precision(format!(
                "estimated error {total_err:e} exceeds target {target:e} after {evaluations} evaluations"
            )));
        }
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::Precision(format!(
                "panel [{:e}, {:e}] cannot be bisected further",
                worst.a, worst.b
            )));
        }
        let (v1, e1) = gk15(&f, worst.a, mid)?;
        let (v2, e2) = gk15(&f, mid, worst.b)?;
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1, depth: worst.depth + 1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2, depth: worst.depth + 1 });
        if total_err < 0.0 {
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
}

pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    integrate_panels(f, &[(a, b)], spec)
}

/// ∫_a^∞ f via x = a + u/(1-u).
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    integrate(
        |u| {
            let w = 1.0 - u;
            f(a + u / w) / (w * w)
        },
        0.0,
        1.0,
        spec,
    )
}
