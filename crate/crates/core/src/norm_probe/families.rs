use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fractal_set::{FractalSet, Interval};
use crate::quadrature::QuadratureSpec;
use crate::radial_operator::{lp_norm, mu_d, spherical_mean, Norm, RadialProfile};
use crate::rational::{pow2, q, qi, to_f64, Q};
use crate::regression::linear_fit;
use crate::type_set_geometry::{predicted_probe_exponents, PredictedExponents, ProbeFamily};

/// Fitted gaps within ±GAP_BAND of zero are inconclusive.
pub const GAP_BAND: f64 = 0.05;
/// Fits with a larger RMS residual (natural-log units) are inconclusive.
pub const RESIDUAL_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProbeKind {
    BallR,
    AnnulusDelta,
    SmallBallDelta,
    SteinLog,
    EndpointLog,
    Lorentz2D,
    LocalAnnulus,
}

impl FromStr for ProbeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "ball" | "ballr" => ProbeKind::BallR,
            "annulus" | "annulusdelta" => ProbeKind::AnnulusDelta,
            "smallball" | "smallballdelta" => ProbeKind::SmallBallDelta,
            "stein" | "steinlog" => ProbeKind::SteinLog,
            "endpoint" | "endpointlog" => ProbeKind::EndpointLog,
            "lorentz" | "lorentz2d" => ProbeKind::Lorentz2D,
            "local" | "localannulus" => ProbeKind::LocalAnnulus,
            other => return Err(Error::Parse(format!("unknown probe family `{other}`"))),
        })
    }
}

impl fmt::Display for ProbeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeKind::BallR => "ball",
            ProbeKind::AnnulusDelta => "annulus",
            ProbeKind::SmallBallDelta => "smallball",
            ProbeKind::SteinLog => "stein",
            ProbeKind::EndpointLog => "endpoint",
            ProbeKind::Lorentz2D => "lorentz",
            ProbeKind::LocalAnnulus => "local",
        })
    }
}

/// Optional family parameters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbeParams {
    /// Annulus centre for `AnnulusDelta` (default: point of E nearest 3/2).
    pub center: Option<Q>,
    /// Window I for `LocalAnnulus`.
    pub window: Option<Interval>,
    /// (β, γ, γ*) used for predictions; estimated from covering numbers
    /// when absent.
    pub dims: Option<(f64, f64, f64)>,
}

/// Radii where the maximal function is bounded below, with the
/// dilation that certifies each sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// Disjoint closed radial intervals.
    pub radii: Vec<(f64, f64)>,
    /// (r, t) pairs; λ is the minimum of A_t f(r) over them.
    pub samples: Vec<(f64, f64)>,
}

impl Witness {
    pub fn measure(&self, d: u32) -> f64 {
        self.radii.iter().map(|&(a, b)| mu_d(d, a, b)).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeInstance {
    pub kind: ProbeKind,
    pub scale: Q,
    pub profile: RadialProfile,
    pub witness: Witness,
}

fn check_scale(scale: &Q) -> Result<f64> {
    if !(*scale > Q::zero() && *scale < qi(1)) {
        return Err(Error::InvalidScale(format!("probe scale {scale} must lie in (0,1)")));
    }
    Ok(to_f64(scale))
}

fn merge_f64(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// f_δ and its witness for E at scale δ (for `BallR`, δ = 1/R).
pub fn build_probe(kind: ProbeKind, params: &ProbeParams, e: &FractalSet, d: u32, scale: &Q) -> Result<ProbeInstance> {
    if d < 2 {
        return Err(Error::param("d", "dimension must be at least 2"));
    }
    let delta = check_scale(scale)?;
    let (profile, witness) = match kind {
        ProbeKind::BallR => {
            let big_r = scale.recip();
            if big_r < qi(4) {
                return Err(Error::InvalidScale(format!("R = {big_r} must be at least 4")));
            }
            let rf = to_f64(&big_r);
            let t0 = to_f64(e.min());
            (
                RadialProfile::indicator(Q::zero(), big_r)?,
                Witness { radii: vec![(0.0, rf / 2.0)], samples: vec![(rf / 4.0, t0), (rf / 2.0, t0)] },
            )
        }
        ProbeKind::AnnulusDelta => {
            let t0 = params.center.clone().unwrap_or_else(|| e.nearest(&q(3, 2)));
            if !e.contains(&t0) {
                return Err(Error::param("center", format!("{t0} is not a point of E")));
            }
            let tf = to_f64(&t0);
            (
                RadialProfile::indicator(&t0 - scale, &t0 + scale)?,
                Witness {
                    radii: vec![(0.0, delta)],
                    samples: vec![(delta / 4.0, tf), (delta / 2.0, tf), (delta, tf)],
                },
            )
        }
        ProbeKind::SmallBallDelta => {
            let pts = e.separated_points(scale);
            let h = delta / 2.0;
            let mut radii = Vec::new();
            let mut samples = Vec::new();
            for p in &pts {
                let t = to_f64(p);
                radii.push((t - h, t + h));
                samples.push((t - h, t));
                samples.push((t + h, t));
            }
            (RadialProfile::indicator(Q::zero(), scale.clone())?, Witness { radii: merge_f64(radii), samples })
        }
        ProbeKind::SteinLog => {
            let dm1 = d as f64 - 1.0;
            let half = q(1, 2);
            if *scale >= half {
                return Err(Error::InvalidScale(format!("cutoff {scale} must be below 1/2")));
            }
            let mut radii = Vec::new();
            let mut samples = Vec::new();
            for p in e.separated_points(&q(1, 8)) {
                let t = to_f64(&p);
                radii.push((t - delta, t + delta));
                samples.extend([(t - delta, t), (t, t), (t + delta, t)]);
            }
            (
                RadialProfile::monomial(1.0, -dm1, -1.0, scale.clone(), Some(half))?,
                Witness { radii: merge_f64(radii), samples },
            )
        }
        ProbeKind::EndpointLog => {
            let n = (-delta.log2()).round();
            if pow2(-(n as i64)) != *scale {
                return Err(Error::InvalidScale(format!("endpoint probe needs δ = 2^-n, got {scale}")));
            }
            let n = n as i64;
            let rho = 2f64.powi(1 - n as i32);
            let mut radii = Vec::new();
            let mut samples = Vec::new();
            for p in e.separated_points(scale) {
                let t = to_f64(&p);
                radii.push(((t - rho).max(0.0), t + rho));
                samples.extend([(t - rho, t), (t + rho, t)]);
            }
            (
                RadialProfile::monomial(1.0, 1.0 - d as f64, 0.0, pow2(-10 * n), Some(qi(1)))?,
                Witness { radii: merge_f64(radii), samples },
            )
        }
        ProbeKind::Lorentz2D => {
            if d != 2 {
                return Err(Error::param("d", "the Lorentz probe is planar"));
            }
            if *scale > q(1, 8) {
                return Err(Error::InvalidScale(format!("δ = {scale} must be at most 1/8")));
            }
            let lo = qi(1);
            let hi = q(5, 4);
            if !e.intervals().iter().any(|iv| iv.lo <= lo && iv.hi >= hi) {
                return Err(Error::DegenerateProbe("the Lorentz witness needs [1, 5/4] ⊂ E".into()));
            }
            let samples = lorentz_radii(delta).into_iter().map(|r| (r, r + 1.0 - delta)).collect();
            (
                RadialProfile::indicator(qi(1) - scale, qi(1))?,
                Witness { radii: vec![(delta, 0.25)], samples },
            )
        }
        ProbeKind::LocalAnnulus => local_annulus(params, e, scale, delta)?,
    };
    if witness.samples.is_empty() {
        return Err(Error::DegenerateProbe(format!("{kind} has an empty witness at scale {scale}")));
    }
    Ok(ProbeInstance { kind, scale: scale.clone(), profile, witness })
}

/// Geometric radii from δ to 1/4, 16 per octave.
pub(crate) fn lorentz_radii(delta: f64) -> Vec<f64> {
    let octaves = (0.25 / delta).log2();
    let n = (octaves * 16.0).ceil().max(2.0) as usize;
    (0..=n).map(|k| delta * (0.25 / delta).powf(k as f64 / n as f64)).collect()
}

fn local_annulus(params: &ProbeParams, e: &FractalSet, scale: &Q, delta: f64) -> Result<(RadialProfile, Witness)> {
    let w = params
        .window
        .clone()
        .ok_or_else(|| Error::param("window", "the localized probe needs a window I"))?;
    if !(w.lo >= qi(1) && w.hi <= qi(2) && w.lo < w.hi) {
        return Err(Error::InvalidWindow(format!("{w} is not a proper subinterval of [1,2]")));
    }
    let len = w.len();
    if len < *scale || len > qi(1) {
        return Err(Error::InvalidWindow(format!("need δ ≤ |I| ≤ 1, got |I| = {len}, δ = {scale}")));
    }
    let pts = e.separated_points_in(scale, Some(&w));
    if pts.is_empty() {
        return Err(Error::DegenerateProbe(format!("E ∩ {w} is empty")));
    }
    let mid = (&w.lo + &w.hi) / qi(2);
    let upper: Vec<&Q> = pts.iter().filter(|p| **p >= mid).collect();
    let h = delta / 2.0;
    let mut radii = Vec::new();
    let mut samples = Vec::new();
    let profile;
    if 2 * upper.len() >= pts.len() {
        // annulus at the left end u, witnesses r ∈ [t - u, t - u + δ/2]
        let u = to_f64(&w.lo);
        profile = RadialProfile::indicator(&w.lo - scale, &w.lo + scale)?;
        for p in upper {
            let t = to_f64(p);
            let r0 = t - u;
            radii.push((r0, r0 + h));
            samples.extend([(r0, t), (r0 + h / 2.0, t), (r0 + h, t)]);
        }
    } else {
        // mirror image: annulus at the right end v, r ∈ [v - t, v - t + δ/2]
        let v = to_f64(&w.hi);
        profile = RadialProfile::indicator(&w.hi - scale, &w.hi + scale)?;
        for p in pts.iter().filter(|p| **p < mid) {
            let t = to_f64(p);
            let r0 = v - t;
            radii.push((r0, r0 + h));
            samples.extend([(r0, t), (r0 + h / 2.0, t), (r0 + h, t)]);
        }
    }
    Ok((profile, Witness { radii: merge_f64(radii), samples }))
}

/// Scale-dependent quantities of one probe instance, independent of (p, q).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeMeasurement {
    pub instance: ProbeInstance,
    /// min over witness samples of A_t f(r)
    pub lambda: f64,
    pub witness_measure: f64,
}

pub fn measure_probe(
    kind: ProbeKind,
    params: &ProbeParams,
    e: &FractalSet,
    d: u32,
    scales: &[Q],
    quad: &QuadratureSpec,
) -> Result<Vec<ProbeMeasurement>> {
    scales.iter().map(|s| measure_one(kind, params, e, d, s, quad)).collect()
}

fn measure_one(
    kind: ProbeKind,
    params: &ProbeParams,
    e: &FractalSet,
    d: u32,
    scale: &Q,
    quad: &QuadratureSpec,
) -> Result<ProbeMeasurement> {
    let instance = build_probe(kind, params, e, d, scale)?;
    let vals: Vec<f64> = instance
        .witness
        .samples
        .par_iter()
        .map(|&(r, t)| spherical_mean(d, &instance.profile, r, t, quad))
        .collect::<Result<_>>()?;
    let lambda = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(lambda > 0.0) {
        return Err(Error::DegenerateProbe(format!(
            "{kind} witness value {lambda} is not positive at scale {scale}"
        )));
    }
    let witness_measure = instance.witness.measure(d);
    Ok(ProbeMeasurement { instance, lambda, witness_measure })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    ViolationDetected,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::ViolationDetected => "violation-detected",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow {
    pub scale: Q,
    pub input_norm: f64,
    pub lambda: f64,
    pub witness_measure: f64,
    pub output: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub kind: ProbeKind,
    pub p: f64,
    pub q: f64,
    pub rows: Vec<ProbeRow>,
    /// Slope of log(output/input) against log δ.
    pub fitted_gap: f64,
    pub fitted_input: f64,
    pub fitted_output: f64,
    pub residual: f64,
    pub predicted: Option<PredictedExponents>,
    pub verdict: Verdict,
    /// Scales dropped after a quadrature failure; any entry forces an
    /// inconclusive verdict.
    pub failed_scales: Vec<Q>,
}

impl ProbeResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("scale,scale_f64,input_norm,lambda,witness_measure,output,ratio\n");
        for r in &self.rows {
            s += &format!(
                "{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
                r.scale,
                to_f64(&r.scale),
                r.input_norm,
                r.lambda,
                r.witness_measure,
                r.output,
                r.ratio
            );
        }
        s
    }

    pub fn summary_line(&self) -> String {
        let pred = self
            .predicted
            .map(|p| if p.logarithmic { "log".to_string() } else { format!("{:.6}", p.gap) })
            .unwrap_or_else(|| "n/a".into());
        format!(
            "{},{:.6},{:.6},{:.6},{:.6},{},{}",
            self.kind, 1.0 / self.p, 1.0 / self.q, self.fitted_gap, self.residual, pred, self.verdict
        )
    }
}

fn family(kind: ProbeKind) -> ProbeFamily {
    match kind {
        ProbeKind::BallR => ProbeFamily::BallR,
        ProbeKind::AnnulusDelta => ProbeFamily::AnnulusDelta,
        ProbeKind::SmallBallDelta => ProbeFamily::SmallBallDelta,
        ProbeKind::SteinLog => ProbeFamily::SteinLog,
        ProbeKind::EndpointLog => ProbeFamily::EndpointLog,
        ProbeKind::Lorentz2D => ProbeFamily::Lorentz2D,
        // the window is held fixed as δ → 0
        ProbeKind::LocalAnnulus => ProbeFamily::LocalAnnulus { window_exponent: Some(0.0) },
    }
}

fn estimate_beta(e: &FractalSet, scales: &[Q]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = scales
        .iter()
        .filter_map(|s| e.covering_number(s).ok().map(|n| (-to_f64(s).ln(), (n as f64).ln())))
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    linear_fit(&xs, &ys).ok().map(|f| f.slope.clamp(0.0, 1.0))
}

/// Norm ratios, exponent fit and verdict for one (p, q). `q = ∞` is
/// passed as `f64::INFINITY`.
pub fn evaluate_probe(
    measurements: &[ProbeMeasurement],
    params: &ProbeParams,
    e: &FractalSet,
    d: u32,
    p: f64,
    q: f64,
    quad: &QuadratureSpec,
) -> Result<ProbeResult> {
    if !(p >= 1.0 && q >= 1.0) {
        return Err(Error::Domain(format!("p = {p} and q = {q} must be at least 1")));
    }
    if measurements.len() < 2 {
        return Err(Error::InsufficientData("a probe fit needs at least two scales".into()));
    }
    let kind = measurements[0].instance.kind;
    let mut rows = Vec::with_capacity(measurements.len());
    for m in measurements {
        let p_arg = if p.is_infinite() { None } else { Some(p) };
        let input_norm = match lp_norm(&m.instance.profile, p_arg, d, quad)? {
            Norm::Finite(v) => v,
            Norm::Divergent => {
                return Err(Error::DegenerateProbe(format!(
                    "{kind} input has infinite L^{p} norm at scale {}",
                    m.instance.scale
                )))
            }
        };
        let output = if q.is_infinite() { m.lambda } else { m.lambda * m.witness_measure.powf(1.0 / q) };
        rows.push(ProbeRow {
            scale: m.instance.scale.clone(),
            input_norm,
            lambda: m.lambda,
            witness_measure: m.witness_measure,
            output,
            ratio: output / input_norm,
        });
    }
    rows.sort_by(|a, b| b.scale.cmp(&a.scale));
    let xs: Vec<f64> = rows.iter().map(|r| to_f64(&r.scale).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.ratio.ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    let fit_in = linear_fit(&xs, &rows.iter().map(|r| r.input_norm.ln()).collect::<Vec<_>>())?;
    let fit_out = linear_fit(&xs, &rows.iter().map(|r| r.output.ln()).collect::<Vec<_>>())?;
    let scales: Vec<Q> = rows.iter().map(|r| r.scale.clone()).collect();
    let dims = params.dims.or_else(|| estimate_beta(e, &scales).map(|b| (b, b, b)));
    let predicted = dims.and_then(|(b, g, gs)| {
        predicted_probe_exponents(d, b, g, gs, p, q, family(kind)).ok()
    });
    let verdict = if fit.residual > RESIDUAL_LIMIT || fit.slope.abs() < GAP_BAND {
        Verdict::Inconclusive
    } else if fit.slope < 0.0 {
        Verdict::ViolationDetected
    } else {
        Verdict::Consistent
    };
    Ok(ProbeResult { kind, p, q, rows, fitted_gap: fit.slope, fitted_input: fit_in.slope, fitted_output: fit_out.slope, residual: fit.residual, predicted, verdict, failed_scales: Vec::new() })
}

#[allow(clippy::too_many_arguments)]
pub fn run_probe(
    kind: ProbeKind,
    params: &ProbeParams,
    e: &FractalSet,
    d: u32,
    p: f64,
    q: f64,
    scales: &[Q],
    quad: &QuadratureSpec,
) -> Result<ProbeResult> {
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for s in scales {
        match measure_one(kind, params, e, d, s, quad) {
            Ok(m) => ok.push(m),
            Err(Error::Precision(_)) | Err(Error::Singularity(_)) => failed.push(s.clone()),
            Err(err) => return Err(err),
        }
    }
    let mut res = evaluate_probe(&ok, params, e, d, p, q, quad)?;
    if !failed.is_empty() {
        res.verdict = Verdict::Inconclusive;
        res.failed_scales = failed;
    }
    Ok(res)
}
