use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fractal_set::{FractalSet, Interval};
use crate::norm_probe::ProbeKind;
use crate::quadrature::QuadratureSpec;
use crate::rational::{parse_q, parse_q_or_inf, qi, qpow, Q};
use crate::type_set_geometry::{RegionKind, TypeSetFlags};

/// Raw experiment file. Unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Generator expression for E, e.g. `cantor(1/3, 12)`.
    pub set: Option<String>,
    pub d: Option<u32>,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default)]
    pub dims: DimsSection,
    #[serde(default)]
    pub region: RegionSection,
    #[serde(default)]
    pub probe: ProbeSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_refinement: Option<u32>,
    pub max_panels: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimsSection {
    pub scales: Option<String>,
    pub thetas: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSection {
    /// `radial` (default), `delta`, `p`, `q` or `qtilde`
    pub kind: Option<String>,
    pub beta: Option<String>,
    pub gamma: Option<String>,
    pub gamma_star: Option<String>,
    #[serde(default)]
    pub minkowski_char_bounded: bool,
    #[serde(default)]
    pub assouad_char_bounded: bool,
    #[serde(default)]
    pub quasi_assouad_regular: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    #[serde(default)]
    pub families: Vec<String>,
    /// Points (1/p, 1/q) written `"1/2, 1/4"`.
    #[serde(default)]
    pub exponents: Vec<String>,
    pub scales: Option<String>,
    pub center: Option<String>,
    pub window: Option<String>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma_star: Option<f64>,
}

/// Parsed and checked configuration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub set: Option<FractalSet>,
    pub d: Option<u32>,
    pub quad: QuadratureSpec,
    pub dims_scales: Option<Vec<Q>>,
    pub thetas: Vec<f64>,
    pub region: Option<RegionRequest>,
    pub probes: Vec<ProbeKind>,
    pub exponents: Vec<(Q, Q)>,
    pub probe_scales: Option<Vec<Q>>,
    pub center: Option<Q>,
    pub window: Option<Interval>,
    pub probe_dims: Option<(f64, f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct RegionRequest {
    /// `None` means the radial type set of the theorems.
    pub kind: Option<RegionKind>,
    pub beta: Q,
    pub gamma: Q,
    pub gamma_star: Q,
    pub flags: TypeSetFlags,
}

fn field<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Config(format!("`{name}`: {e}")))
}

/// `b^-k0..b^-k1` or a comma list of rationals, strictly decreasing in (0,1).
pub fn parse_scales(text: &str) -> Result<Vec<Q>> {
    let text = text.trim();
    let out = if let Some((a, b)) = text.split_once("..") {
        let (base_a, ka) = split_power(a)?;
        let (base_b, kb) = split_power(b)?;
        if base_a != base_b {
            return Err(Error::Parse(format!("range `{text}` mixes bases")));
        }
        if kb < ka {
            return Err(Error::Parse(format!("range `{text}` must run towards finer scales")));
        }
        let inv = base_a.recip();
        (ka..=kb).map(|k| qpow(&inv, k)).collect()
    } else {
        text.split(',').map(parse_q).collect::<Result<Vec<_>>>()?
    };
    if out.is_empty() {
        return Err(Error::Parse("empty scale list".into()));
    }
    if let Some(s) = out.iter().find(|s| !(**s > qi(0) && **s < qi(1))) {
        return Err(Error::Parse(format!("scale {s} is not in (0,1)")));
    }
    if out.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Parse("scales must be strictly decreasing".into()));
    }
    Ok(out)
}

fn split_power(s: &str) -> Result<(Q, i64)> {
    let (b, e) = s
        .trim()
        .split_once("^-")
        .ok_or_else(|| Error::Parse(format!("expected b^-k, found `{s}`")))?;
    let base = parse_q(b)?;
    if base <= qi(1) {
        return Err(Error::Parse(format!("scale base {base} must exceed 1")));
    }
    let k = e.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?;
    Ok((base, k))
}

/// `"1/2, 1/4"` → (1/p, 1/q).
pub fn parse_exponent_pair(text: &str) -> Result<(Q, Q)> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected `1/p, 1/q`, found `{text}`")))?;
    let (x, y) = (parse_q(a)?, parse_q(b)?);
    let zero = qi(0);
    if !(zero <= x && x <= qi(1) && zero <= y && y <= qi(1)) {
        return Err(Error::Parse(format!("({x}, {y}) is outside the unit square")));
    }
    Ok((x, y))
}

fn parse_window(text: &str) -> Result<Interval> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']');
    let (a, b) = t.split_once(',').ok_or_else(|| Error::Parse(format!("expected `[lo, hi]`, found `{text}`")))?;
    let (lo, hi) = (parse_q(a)?, parse_q(b)?);
    if lo >= hi {
        return Err(Error::Parse(format!("empty window {text}")));
    }
    Ok(Interval::new(lo, hi))
}

fn parse_dim(name: &str, s: &str) -> Result<Q> {
    field(name, parse_q_or_inf(s)?.ok_or_else(|| Error::Parse("dimension cannot be infinite".into())))
}

impl std::str::FromStr for ExperimentConfig {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string() + &span_hint(text, e.span())))
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<(Self, String)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Ok((text.parse()?, text))
    }

    /// Checks every field that is present; nothing runs unless all pass.
    pub fn resolve(&self) -> Result<Resolved> {
        let set = match &self.set {
            Some(s) => Some(field("set", FractalSet::parse(s))?),
            None => None,
        };
        if let Some(d) = self.d {
            if !(2..=64).contains(&d) {
                return Err(Error::Config(format!("`d`: {d} not in 2..=64")));
            }
        }
        let mut quad = QuadratureSpec::default();
        let qs = &self.quadrature;
        if let Some(v) = qs.rel_tol {
            quad.rel_tol = v;
        }
        if let Some(v) = qs.abs_tol {
            quad.abs_tol = v;
        }
        if let Some(v) = qs.max_refinement {
            quad.max_refinement = v;
        }
        if let Some(v) = qs.max_panels {
            quad.max_panels = v;
        }
        field("quadrature", quad.validate())?;
        let dims_scales = self.dims.scales.as_deref().map(|s| field("dims.scales", parse_scales(s))).transpose()?;
        let thetas = self.dims.thetas.clone().unwrap_or_else(|| vec![0.25, 0.5, 0.75]);
        if thetas.iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
            return Err(Error::Config("`dims.thetas`: every θ must lie in (0,1)".into()));
        }
        let r = &self.region;
        let region = match &r.beta {
            None => {
                if r.gamma.is_some() || r.gamma_star.is_some() || r.kind.is_some() {
                    return Err(Error::Config("`region.beta`: required when [region] is used".into()));
                }
                None
            }
            Some(b) => {
                let beta = parse_dim("region.beta", b)?;
                let gamma = match &r.gamma {
                    Some(g) => parse_dim("region.gamma", g)?,
                    None => beta.clone(),
                };
                let gamma_star = match &r.gamma_star {
                    Some(g) => parse_dim("region.gamma_star", g)?,
                    None => gamma.clone(),
                };
                let kind = match r.kind.as_deref() {
                    None | Some("radial") => None,
                    Some(k) => Some(field("region.kind", k.parse::<RegionKind>())?),
                };
                Some(RegionRequest {
                    kind,
                    beta,
                    gamma,
                    gamma_star,
                    flags: TypeSetFlags {
                        minkowski_char_bounded: r.minkowski_char_bounded,
                        assouad_char_bounded: r.assouad_char_bounded,
                        quasi_assouad_regular: r.quasi_assouad_regular,
                    },
                })
            }
        };
        let p = &self.probe;
        let probes = p
            .families
            .iter()
            .map(|f| field("probe.families", f.parse::<ProbeKind>()))
            .collect::<Result<Vec<_>>>()?;
        let exponents = p
            .exponents
            .iter()
            .map(|e| field("probe.exponents", parse_exponent_pair(e)))
            .collect::<Result<Vec<_>>>()?;
        let probe_scales = p.scales.as_deref().map(|s| field("probe.scales", parse_scales(s))).transpose()?;
        let center = p.center.as_deref().map(|s| field("probe.center", parse_q(s))).transpose()?;
        let window = p.window.as_deref().map(|s| field("probe.window", parse_window(s))).transpose()?;
        let probe_dims = match (p.beta, p.gamma, p.gamma_star) {
            (None, None, None) => None,
            (Some(b), g, gs) => {
                let g = g.unwrap_or(b);
                Some((b, g, gs.unwrap_or(g)))
            }
            _ => return Err(Error::Config("`probe.beta`: required when γ or γ* is given".into())),
        };
        Ok(Resolved {
            set,
            d: self.d,
            quad,
            dims_scales,
            thetas,
            region,
            probes,
            exponents,
            probe_scales,
            center,
            window,
            probe_dims,
        })
    }
}

fn span_hint(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(r) => {
            let line = text[..r.start.min(text.len())].matches('\n').count() + 1;
            format!(" (line {line})")
        }
        None => String::new(),
    }
}

impl Resolved {
    pub fn require_set(&self) -> Result<&FractalSet> {
        self.set.as_ref().ok_or_else(|| Error::Config("`set`: missing".into()))
    }

    pub fn require_d(&self) -> Result<u32> {
        self.d.ok_or_else(|| Error::Config("`d`: missing".into()))
    }
}
