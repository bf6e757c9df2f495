use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{qi, Q};

/// Counterexample families with a power-law prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeFamily {
    /// χ_{B_R}, scale δ = 1/R
    BallR,
    /// χ of an annulus of width 2δ
    AnnulusDelta,
    /// χ_{[0,δ]}
    SmallBallDelta,
    /// Localized annulus with window |I| = δ^θ; `None` takes θ = 1 - β/γ.
    LocalAnnulus { window_exponent: Option<f64> },
    /// Families whose growth is logarithmic rather than a power of δ.
    SteinLog,
    EndpointLog,
    Lorentz2D,
}

/// Exponents of δ: ‖f_δ‖_p ~ δ^input, output functional ~ δ^output,
/// ratio ~ δ^gap. A negative gap means the bound fails as δ → 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedExponents {
    pub input: f64,
    pub output: f64,
    pub gap: f64,
    /// True when the family detects failure through a logarithm, so the
    /// power exponents carry no information.
    pub logarithmic: bool,
}

/// L(1/p, 1/q) = 1/2 + (1-γ)/q + (1-β/γ)((1+γ)/q - 1/2) - 1/p, exactly.
pub fn critical_functional(beta: &Q, gamma: &Q, x: &Q, y: &Q) -> Result<Q> {
    if gamma.is_zero() {
        return Err(Error::Domain("the critical functional needs γ > 0".into()));
    }
    let half = Q::one() / qi(2);
    let theta = Q::one() - beta / gamma;
    Ok(&half + (Q::one() - gamma) * y + theta * ((Q::one() + gamma) * y - &half) - x)
}

pub fn predicted_probe_exponents(
    d: u32,
    beta: f64,
    gamma: f64,
    gamma_star: f64,
    p: f64,
    q: f64,
    family: ProbeFamily,
) -> Result<PredictedExponents> {
    if d < 2 {
        return Err(Error::param("d", "dimension must be at least 2"));
    }
    if !(0.0 <= beta && beta <= gamma && gamma <= gamma_star && gamma_star <= 1.0) {
        return Err(Error::Domain(format!(
            "need 0 ≤ β ≤ γ ≤ γ* ≤ 1 (β = {beta}, γ = {gamma}, γ* = {gamma_star})"
        )));
    }
    if !(p >= 1.0 && q >= 1.0) {
        return Err(Error::Domain(format!("p = {p} and q = {q} must be at least 1")));
    }
    let df = d as f64;
    let (x, y) = (1.0 / p, 1.0 / q);
    let (input, output, logarithmic) = match family {
        ProbeFamily::BallR => (-df * x, -df * y, false),
        ProbeFamily::AnnulusDelta => (x, df * y, false),
        ProbeFamily::SmallBallDelta => (df * x, df - 1.0 + (1.0 - beta) * y, false),
        ProbeFamily::LocalAnnulus { window_exponent } => {
            let theta = window_exponent.unwrap_or(if gamma > 0.0 { 1.0 - beta / gamma } else { 0.0 });
            if !(0.0..=1.0).contains(&theta) {
                return Err(Error::param("window_exponent", format!("{theta} not in [0,1]")));
            }
            let count = gamma * (1.0 - theta);
            (x, 0.5 + y + theta * (y - 0.5) - count * y, false)
        }
        ProbeFamily::SteinLog | ProbeFamily::EndpointLog | ProbeFamily::Lorentz2D => (0.0, 0.0, true),
    };
    Ok(PredictedExponents { input, output, gap: output - input, logarithmic })
}
