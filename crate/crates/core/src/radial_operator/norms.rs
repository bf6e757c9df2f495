use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity, QuadratureSpec};

use super::kernel::check_dimension;
use super::profile::{Monomial, Piece, RadialProfile};

/// A norm that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Norm {
    Finite(f64),
    Divergent,
}

impl Norm {
    pub fn value(&self) -> Option<f64> {
        match self {
            Norm::Finite(v) => Some(*v),
            Norm::Divergent => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Norm::Divergent)
    }
}

/// μ_d([a, b]) = (b^d - a^d)/d, the radial measure s^{d-1} ds.
pub fn mu_d(d: u32, a: f64, b: f64) -> f64 {
    (b.powi(d as i32) - a.powi(d as i32)) / d as f64
}

/// Dominant monomial as s → 0: smallest power, then largest log power.
fn dominant_at_zero(terms: &[Monomial]) -> Monomial {
    *terms
        .iter()
        .filter(|m| m.coef != 0.0)
        .min_by(|x, y| x.power.total_cmp(&y.power).then(y.log_power.total_cmp(&x.log_power)))
        .unwrap_or(&terms[0])
}

fn dominant_at_infinity(terms: &[Monomial]) -> Monomial {
    *terms
        .iter()
        .filter(|m| m.coef != 0.0)
        .max_by(|x, y| x.power.total_cmp(&y.power))
        .unwrap_or(&terms[0])
}

fn piece_diverges(piece: &Piece, p: f64, d: u32) -> bool {
    let dm1 = d as f64 - 1.0;
    if piece.terms.iter().all(|m| m.coef == 0.0) {
        return false;
    }
    if piece.lo_f64() == 0.0 {
        let m = dominant_at_zero(&piece.terms);
        let e = m.power * p + dm1;
        if e < -1.0 || (e == -1.0 && m.log_power * p >= -1.0) {
            return true;
        }
    }
    if piece.hi_f64().is_infinite() {
        let m = dominant_at_infinity(&piece.terms);
        if m.power * p + dm1 >= -1.0 {
            return true;
        }
    }
    if piece.hi_f64() == 1.0 {
        if let Some(m) = piece.terms.iter().filter(|m| m.log_power < 0.0).min_by(|x, y| x.log_power.total_cmp(&y.log_power)) {
            if m.log_power * p <= -1.0 {
                return true;
            }
        }
    }
    false
}

/// ∫_lo^hi |piece(s)|^p s^{d-1} ds for a convergent piece.
fn piece_integral(piece: &Piece, p: f64, d: u32, quad: &QuadratureSpec) -> Result<f64> {
    let dm1 = d as f64 - 1.0;
    let (lo, hi) = (piece.lo_f64(), piece.hi_f64());
    if piece.terms.len() == 1 {
        let m = piece.terms[0];
        let c = m.coef.abs().powf(p);
        let e = m.power * p + dm1;
        if m.log_power == 0.0 {
            let v = if e == -1.0 {
                (hi / lo).ln()
            } else {
                let hi_term = if hi.is_infinite() { 0.0 } else { hi.powf(e + 1.0) };
                (hi_term - lo.powf(e + 1.0)) / (e + 1.0)
            };
            return Ok(c * v);
        }
        // s = e^{-w}: ∫ e^{-(e+1)w} w^{bp} dw over [ln(1/hi), ln(1/lo)]
        let k = e + 1.0;
        let mm = m.log_power * p;
        let w_hi = -hi.ln();
        let w_lo = if lo == 0.0 { f64::INFINITY } else { -lo.ln() };
        if k == 0.0 {
            let top = if w_lo.is_infinite() { 0.0 } else { w_lo.powf(mm + 1.0) };
            let v = if mm == -1.0 { (w_lo / w_hi).ln() } else { (top - w_hi.powf(mm + 1.0)) / (mm + 1.0) };
            return Ok(c * v);
        }
        let g = |w: f64| (-k * w).exp() * w.powf(mm);
        let v = if w_lo.is_infinite() {
            integrate_to_infinity(g, w_hi, quad)?.value
        } else {
            integrate(g, w_hi, w_lo, quad)?.value
        };
        return Ok(c * v);
    }
    let h = |s: f64| piece.eval(s).abs().powf(p) * s.powf(dm1);
    let mut total = 0.0;
    // part inside (0, 1]: s = e^{-w}
    if lo < 1.0 {
        let top = hi.min(1.0);
        let w_hi = -top.ln();
        let w_lo = if lo == 0.0 { f64::INFINITY } else { -lo.ln() };
        let g = |w: f64| {
            let s = (-w).exp();
            h(s) * s
        };
        total += if w_lo.is_infinite() {
            integrate_to_infinity(g, w_hi, quad)?.value
        } else {
            integrate(g, w_hi, w_lo, quad)?.value
        };
    }
    if hi > 1.0 {
        let start = lo.max(1.0);
        total += if hi.is_infinite() {
            integrate_to_infinity(h, start, quad)?.value
        } else {
            integrate(h, start, hi, quad)?.value
        };
    }
    Ok(total)
}

fn piece_sup(piece: &Piece) -> Norm {
    let (lo, hi) = (piece.lo_f64(), piece.hi_f64());
    let zero = dominant_at_zero(&piece.terms);
    if lo == 0.0 && (zero.power < 0.0 || (zero.power == 0.0 && zero.log_power > 0.0)) {
        return Norm::Divergent;
    }
    if hi.is_infinite() && dominant_at_infinity(&piece.terms).power > 0.0 {
        return Norm::Divergent;
    }
    if hi == 1.0 && piece.terms.iter().any(|m| m.log_power < 0.0 && m.coef != 0.0) {
        return Norm::Divergent;
    }
    let mut cands: Vec<f64> = Vec::new();
    let lo_eval = if lo == 0.0 { f64::MIN_POSITIVE.sqrt() } else { lo };
    let hi_eval = if hi.is_infinite() { 1e12 } else if hi == 1.0 && piece.has_log() { 1.0 - 1e-12 } else { hi };
    cands.push(lo_eval);
    cands.push(hi_eval);
    if piece.terms.len() == 1 {
        let m = piece.terms[0];
        if m.power != 0.0 && m.log_power != 0.0 {
            let s = (-m.log_power / m.power).exp();
            if s > lo && s < hi {
                cands.push(s);
            }
        }
    } else {
        let (a, b) = (lo_eval.ln(), hi_eval.ln());
        for i in 1..2000 {
            cands.push((a + (b - a) * i as f64 / 2000.0).exp());
        }
    }
    Norm::Finite(cands.iter().map(|&s| piece.eval(s).abs()).fold(0.0, f64::max))
}

/// ‖f₀‖ in L^p(s^{d-1} ds); `p = None` is the sup norm.
pub fn lp_norm(f: &RadialProfile, p: Option<f64>, d: u32, quad: &QuadratureSpec) -> Result<Norm> {
    check_dimension(d)?;
    match p {
        None => {
            let mut best = 0.0f64;
            for piece in f.pieces() {
                match piece_sup(piece) {
                    Norm::Divergent => return Ok(Norm::Divergent),
                    Norm::Finite(v) => best = best.max(v),
                }
            }
            Ok(Norm::Finite(best))
        }
        Some(p) => {
            if !(p >= 1.0 && p.is_finite()) {
                return Err(Error::param("p", format!("{p} must be in [1, ∞]")));
            }
            let mut total = 0.0;
            for piece in f.pieces() {
                if piece_diverges(piece, p, d) {
                    return Ok(Norm::Divergent);
                }
                total += piece_integral(piece, p, d, quad)?;
            }
            Ok(Norm::Finite(total.powf(1.0 / p)))
        }
    }
}

fn check_samples(samples: &[(f64, f64)]) -> Result<()> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData("need at least two radial samples".into()));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) || samples[0].0 < 0.0 {
        return Err(Error::param("samples", "radii must be non-negative and strictly increasing"));
    }
    Ok(())
}

/// Value and measure of each cell [r_i, r_{i+1}), sorted by value
/// descending. A cell carries the smaller of its two endpoint samples, so
/// the step function lies below any monotone interpolation.
fn cells(samples: &[(f64, f64)], d: u32) -> Vec<(f64, f64)> {
    let mut c: Vec<(f64, f64)> = samples
        .windows(2)
        .map(|w| (w[0].1.abs().min(w[1].1.abs()), mu_d(d, w[0].0, w[1].0)))
        .collect();
    c.sort_by(|a, b| b.0.total_cmp(&a.0));
    c
}

/// sup_λ λ·μ_d{|g| > λ}^{1/q} for the step function sampled at the given
/// (radius, value) pairs; `q = None` is the sup.
pub fn weak_lq_quasinorm(samples: &[(f64, f64)], q: Option<f64>, d: u32) -> Result<f64> {
    check_samples(samples)?;
    let cs = cells(samples, d);
    let q = match q {
        None => return Ok(cs[0].0),
        Some(q) if q > 0.0 => q,
        Some(q) => return Err(Error::param("q", format!("{q} must be positive"))),
    };
    let mut measure = 0.0;
    let mut best = 0.0f64;
    for (v, m) in cs {
        measure += m;
        best = best.max(v * measure.powf(1.0 / q));
    }
    Ok(best)
}

/// ∫_{λ_lo}^{λ_hi} (λ μ_d{|g| > λ}^{1/q})^s dλ/λ for the sampled step function.
pub fn lorentz_level_integral(
    samples: &[(f64, f64)],
    q: f64,
    s: f64,
    d: u32,
    lambda_range: (f64, f64),
) -> Result<f64> {
    check_samples(samples)?;
    let (lam_lo, lam_hi) = lambda_range;
    if !(lam_lo > 0.0 && lam_hi > lam_lo) {
        return Err(Error::param("lambda_range", "need 0 < λ_lo < λ_hi"));
    }
    if !(q > 0.0 && s > 0.0) {
        return Err(Error::param("q", "exponents must be positive"));
    }
    let cs = cells(samples, d);
    // μ(λ) is constant on [v_{k+1}, v_k): it equals the measure of the
    // first k+1 cells.
    let mut total = 0.0;
    let mut measure = 0.0;
    for k in 0..cs.len() {
        measure += cs[k].1;
        let top = cs[k].0;
        let bottom = if k + 1 < cs.len() { cs[k + 1].0 } else { 0.0 };
        let a = bottom.max(lam_lo);
        let b = top.min(lam_hi);
        if b > a {
            total += measure.powf(s / q) * (b.powf(s) - a.powf(s)) / s;
        }
    }
    Ok(total)
}
