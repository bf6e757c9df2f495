use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fractal_set::{FractalGenerator, FractalSet};
use crate::quadrature::QuadratureSpec;
use crate::radial_operator::{
    circular_components, circular_indicator_components, higher_components, lorentz_level_integral,
    maximal_value, spherical_mean, weak_lq_quasinorm, DilationGrid, RadialProfile,
};
use crate::rational::{from_f64_dyadic, pow2, q, qi, to_f64, Q};

use super::families::{lorentz_radii, measure_probe, ProbeKind, ProbeParams};

#[derive(Debug, Clone, PartialEq)]
pub struct SteinRow {
    pub epsilon: Q,
    pub max_value: f64,
    pub t_max: f64,
}

/// M_E F_ε(r) for F_ε(x) = |x|^{1-d} log^{-1}(1/|x|) χ_{ε<|x|<1/2},
/// with dilations t ∈ E, |t - r| ≤ 1/8, on a 1/64 grid.
pub fn stein_probe(d: u32, e: &FractalSet, r: f64, epsilons: &[Q], quad: &QuadratureSpec) -> Result<Vec<SteinRow>> {
    let grid = DilationGrid::from_set(e, &q(1, 64))?.filtered(|t| (t - r).abs() <= 0.125);
    if grid.is_empty() {
        return Err(Error::DegenerateProbe(format!("E has no dilations within 1/8 of r = {r}")));
    }
    epsilons
        .iter()
        .map(|eps| {
            if !(*eps > qi(0) && *eps < q(1, 2)) {
                return Err(Error::InvalidScale(format!("ε = {eps} must lie in (0, 1/2)")));
            }
            let f = RadialProfile::monomial(1.0, 1.0 - d as f64, -1.0, eps.clone(), Some(q(1, 2)))?;
            let m = maximal_value(d, &f, r, &grid, quad)?;
            Ok(SteinRow { epsilon: eps.clone(), max_value: m.value, t_max: m.t_max })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EndpointRow {
    pub n: u32,
    /// min over the witness of A_t f_n(r), f_n = |x|^{1-d} χ_{2^{-10n}<|x|<1}
    pub min_value: f64,
    pub value_over_n: f64,
    pub witness_measure: f64,
    /// (n log 2)^{q/d} 2^{-n} N(E, 2^{-n})
    pub count_criterion: f64,
    /// |W_n| n^{q/d}
    pub measure_criterion: f64,
}

pub fn endpoint_log_probe(d: u32, q_exp: f64, e: &FractalSet, ns: &[u32], quad: &QuadratureSpec) -> Result<Vec<EndpointRow>> {
    if !(q_exp >= 1.0) {
        return Err(Error::param("q", format!("{q_exp} must be at least 1")));
    }
    let scales: Vec<Q> = ns.iter().map(|&n| pow2(-(n as i64))).collect();
    if ns.contains(&0) {
        return Err(Error::InvalidScale("n must be positive".into()));
    }
    let ms = measure_probe(ProbeKind::EndpointLog, &ProbeParams::default(), e, d, &scales, quad)?;
    let qd = q_exp / d as f64;
    ns.iter()
        .zip(ms)
        .map(|(&n, m)| {
            let nf = n as f64;
            let count = e.covering_number(&m.instance.scale)? as f64;
            Ok(EndpointRow {
                n,
                min_value: m.lambda,
                value_over_n: m.lambda / nf,
                witness_measure: m.witness_measure,
                count_criterion: (nf * std::f64::consts::LN_2).powf(qd) * 2f64.powi(-(n as i32)) * count,
                measure_criterion: m.witness_measure * nf.powf(qd),
            })
        })
        .collect()
}

/// Lebesgue exponent of the planar Lorentz experiment.
pub const LORENTZ_Q: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct LorentzRow {
    pub delta: Q,
    /// largest c with g(r) ≥ c (δ/r)^{1/2} at every sample
    pub c: f64,
    /// ∫ (λ μ{g > λ}^{1/4})^s dλ/λ over the sampled value range
    pub level_integral: f64,
    /// level integral / δ^{s/2}
    pub ratio: f64,
    pub ratio_over_log: f64,
    /// weak L^4 quasinorm / δ^{1/2}
    pub weak_sup: f64,
}

/// g(r) = A_{r+1-δ} χ_{[1-δ,1]}(r) on r ∈ [δ, 1/4] in the plane; the
/// level integral runs over λ ∈ [c δ^{1/2}, c].
pub fn lorentz_log_probe(s: f64, deltas: &[Q], quad: &QuadratureSpec) -> Result<Vec<LorentzRow>> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::param("s", format!("{s} must be positive and finite")));
    }
    deltas
        .iter()
        .map(|delta| {
            if !(*delta > qi(0) && *delta <= q(1, 8)) {
                return Err(Error::InvalidScale(format!("δ = {delta} must lie in (0, 1/8]")));
            }
            let df = to_f64(delta);
            let f = RadialProfile::indicator(qi(1) - delta, qi(1))?;
            let samples: Vec<(f64, f64)> = lorentz_radii(df)
                .into_par_iter()
                .map(|r| spherical_mean(2, &f, r, r + 1.0 - df, quad).map(|v| (r, v)))
                .collect::<Result<_>>()?;
            let c = samples.iter().map(|&(r, v)| v * (r / df).sqrt()).fold(f64::INFINITY, f64::min);
            let level_integral = lorentz_level_integral(&samples, LORENTZ_Q, s, 2, (c * df.sqrt(), c))?;
            let ratio = level_integral / df.powf(s / 2.0);
            let weak = weak_lq_quasinorm(&samples, Some(LORENTZ_Q), 2)?;
            Ok(LorentzRow {
                delta: delta.clone(),
                c,
                level_integral,
                ratio,
                ratio_over_log: ratio / (1.0 / df).ln(),
                weak_sup: weak / df.sqrt(),
            })
        })
        .collect()
}

/// Subset of [1,2) whose dyadic count at level n is about 2^n n^{-q/d}:
/// left endpoints of the kept cells at level `n_max`.
pub fn log_thinned_set(q_exp: f64, d: u32, n_max: u32) -> Result<FractalSet> {
    if !(q_exp > 0.0) || d < 2 {
        return Err(Error::param("q", "need q > 0 and d ≥ 2"));
    }
    if !(1..=24).contains(&n_max) {
        return Err(Error::param("n_max", format!("{n_max} not in 1..=24")));
    }
    let qd = q_exp / d as f64;
    // cell indices at the current level
    let mut cells: Vec<u64> = vec![0];
    for n in 1..=n_max {
        let target = (2f64.powi(n as i32) * (n as f64).powf(-qd)).ceil() as usize;
        let have = cells.len();
        let want = target.clamp(have, 2 * have);
        let doubles = want - have;
        let mut next = Vec::with_capacity(want);
        for (i, &c) in cells.iter().enumerate() {
            next.push(2 * c);
            if (i + 1) * doubles / have > i * doubles / have {
                next.push(2 * c + 1);
            }
        }
        cells = next;
    }
    let h = pow2(-(n_max as i64));
    let pts = cells.into_iter().map(|c| qi(1) + Q::from_integer((c as i64).into()) * &h).collect();
    FractalSet::from_generator(FractalGenerator::FinitePoints(pts))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominationKind {
    /// M_E f ≤ C (𝔐 + R₁ + R₂), d ≥ 3
    Higher,
    /// M_E f ≤ C (𝔐 + 𝔐̃ + R₁..R₄), d = 2
    Circular,
    /// M_{[1,2]} χ_F ≤ C (√(Uχ_F) + √(Rχ_F)), d = 2
    CircularIndicator,
}

impl FromStr for DominationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "higher" => Ok(Self::Higher),
            "circular" => Ok(Self::Circular),
            "indicator" | "circular-indicator" => Ok(Self::CircularIndicator),
            o => Err(Error::Parse(format!("unknown domination kind `{o}`"))),
        }
    }
}

impl fmt::Display for DominationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Higher => "higher",
            Self::Circular => "circular",
            Self::CircularIndicator => "indicator",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominationReport {
    pub kind: DominationKind,
    pub samples: usize,
    /// max ratio over the first half of the samples
    pub constant_half: f64,
    /// max ratio over all samples
    pub constant: f64,
    /// (constant - constant_half) / constant_half
    pub drift: f64,
    /// (profile, r, M f(r), dominating sum)
    pub worst: (String, f64, f64, f64),
}

fn random_profile(rng: &mut ChaCha8Rng, d: u32, indicator_only: bool) -> Result<RadialProfile> {
    let dy = |x: f64| from_f64_dyadic(x, 16);
    let lo = rng.random_range(0.0..3.0);
    let hi = lo + rng.random_range(0.05..2.0);
    if indicator_only || rng.random_bool(0.5) {
        RadialProfile::indicator(dy(lo), dy(hi))
    } else {
        let power = rng.random_range((2.5 - d as f64)..1.0);
        let power = (power * 8.0).round() / 8.0;
        RadialProfile::monomial(1.0, power, 0.0, dy(lo), Some(dy(hi)))
    }
}

/// Empirical constant in the pointwise domination of M_E by the
/// decomposition operators, over `n` random profiles and radii.
pub fn domination_constant(
    kind: DominationKind,
    d: u32,
    e: &FractalSet,
    n: usize,
    seed: u64,
    quad: &QuadratureSpec,
) -> Result<DominationReport> {
    match kind {
        DominationKind::Higher if d < 3 => return Err(Error::param("d", "higher domination needs d ≥ 3")),
        DominationKind::Circular | DominationKind::CircularIndicator if d != 2 => {
            return Err(Error::param("d", "circular domination is planar"))
        }
        _ => {}
    }
    if n < 2 {
        return Err(Error::InsufficientData("need at least two samples".into()));
    }
    let unit = FractalSet::from_generator(FractalGenerator::FullInterval)?;
    let unit_grid = DilationGrid::from_set(&unit, &q(1, 32))?;
    let e_grid = match kind {
        DominationKind::CircularIndicator => unit_grid.clone(),
        _ => DilationGrid::from_set(e, &q(1, 64))?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(RadialProfile, f64)> = (0..n)
        .map(|_| {
            let f = random_profile(&mut rng, d, kind == DominationKind::CircularIndicator)?;
            let r = rng.random_range(0.05..5.0);
            Ok((f, r))
        })
        .collect::<Result<_>>()?;
    let ratios: Vec<(f64, f64, f64)> = cases
        .par_iter()
        .map(|(f, r)| {
            let m = e_grid
                .points()
                .iter()
                .map(|&t| spherical_mean(d, f, *r, t, quad).map(f64::abs))
                .try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v)))?;
            let dom = match kind {
                DominationKind::Higher => higher_components(d, &e_grid, &unit_grid, f, 2.0, *r, quad)?.total(),
                DominationKind::Circular => circular_components(&e_grid, f, 2.0, *r, quad)?.total(),
                DominationKind::CircularIndicator => {
                    let c = circular_indicator_components(&unit_grid, f, *r, quad)?;
                    c.values.iter().map(|(_, v)| v.sqrt()).sum()
                }
            };
            let ratio = if m == 0.0 {
                0.0
            } else if dom > 0.0 {
                m / dom
            } else {
                f64::INFINITY
            };
            Ok((ratio, m, dom))
        })
        .collect::<Result<_>>()?;
    let argmax = |k: usize| (0..k).fold(0, |b, i| if ratios[i].0 > ratios[b].0 { i } else { b });
    let half = argmax(n / 2);
    let all = argmax(n);
    let constant_half = ratios[half].0;
    let constant = ratios[all].0;
    Ok(DominationReport {
        kind,
        samples: n,
        constant_half,
        constant,
        drift: if constant_half > 0.0 { (constant - constant_half) / constant_half } else { f64::INFINITY },
        worst: (cases[all].0.to_string(), cases[all].1, ratios[all].1, ratios[all].2),
    })
}
