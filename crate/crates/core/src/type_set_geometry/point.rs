use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{qi, to_f64, Q};

/// A point (1/p, 1/q) with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegionPoint {
    pub x: Q,
    pub y: Q,
}

impl RegionPoint {
    pub fn new(x: Q, y: Q) -> Self {
        RegionPoint { x, y }
    }

    pub fn origin() -> Self {
        RegionPoint { x: Q::zero(), y: Q::zero() }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }

    pub(crate) fn sub(&self, o: &RegionPoint) -> (Q, Q) {
        (&self.x - &o.x, &self.y - &o.y)
    }

    pub(crate) fn lerp(&self, o: &RegionPoint, t: &Q) -> RegionPoint {
        RegionPoint {
            x: &self.x + (&o.x - &self.x) * t,
            y: &self.y + (&o.y - &self.y) * t,
        }
    }
}

impl fmt::Display for RegionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexName {
    O,
    P1,
    P2,
    P3,
    Q1,
    Q2,
    Q3,
    Q3Tilde,
}

impl FromStr for VertexName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "O" => VertexName::O,
            "P1" => VertexName::P1,
            "P2" => VertexName::P2,
            "P3" => VertexName::P3,
            "Q1" => VertexName::Q1,
            "Q2" => VertexName::Q2,
            "Q3" => VertexName::Q3,
            "Q3T" | "Q3TILDE" | "Q3~" => VertexName::Q3Tilde,
            _ => return Err(Error::Parse(format!("unknown vertex `{s}`"))),
        })
    }
}

pub(crate) fn p1(d: &Q, beta: &Q) -> RegionPoint {
    let dm1 = d - Q::one();
    let v = &dm1 / (&dm1 + beta);
    RegionPoint::new(v.clone(), v)
}

pub(crate) fn p2(d: &Q, beta: &Q) -> RegionPoint {
    let den = d - beta + Q::one();
    RegionPoint::new((d - beta) / &den, Q::one() / den)
}

pub(crate) fn p3(d: &Q, gamma: &Q) -> RegionPoint {
    let dm1 = d - Q::one();
    let den = d * d + qi(2) * gamma - Q::one();
    RegionPoint::new(d * &dm1 / &den, dm1 / den)
}

pub(crate) fn q2(d: &Q, beta: &Q) -> RegionPoint {
    let dm1 = d - Q::one();
    let den = d * d - Q::one() + beta;
    RegionPoint::new(d * &dm1 / &den, dm1 / den)
}

/// θ(β,γ) = (1-β)/(2(γ-β)), with θ(1,1) = 1.
pub(crate) fn theta(beta: &Q, gamma: &Q) -> Q {
    if beta == gamma {
        Q::one()
    } else {
        (Q::one() - beta) / (qi(2) * (gamma - beta))
    }
}

pub(crate) fn q3(beta: &Q, gamma: &Q) -> Result<RegionPoint> {
    let lhs = beta + Q::one();
    let two_g = qi(2) * gamma;
    if !(Q::one() <= lhs && lhs <= two_g && two_g <= qi(2)) {
        return Err(Error::Domain(format!(
            "Q3 needs 1 ≤ β+1 ≤ 2γ ≤ 2 (β = {beta}, γ = {gamma})"
        )));
    }
    let th = theta(beta, gamma);
    let den = qi(2) * (Q::one() + gamma * &th);
    Ok(RegionPoint::new((qi(2) - beta * (Q::one() - &th)) / &den, Q::one() / den))
}

pub(crate) fn q3_tilde(beta: &Q) -> RegionPoint {
    RegionPoint::new((qi(2) - beta) / qi(2), Q::one() / qi(2))
}

pub(crate) fn check_dims(beta: &Q, gamma: &Q) -> Result<()> {
    if !(Q::zero() <= *beta && beta <= gamma && *gamma <= Q::one()) {
        return Err(Error::Domain(format!("need 0 ≤ β ≤ γ ≤ 1 (β = {beta}, γ = {gamma})")));
    }
    Ok(())
}

pub(crate) fn check_d(d: u32) -> Result<Q> {
    if d < 2 {
        return Err(Error::param("d", format!("dimension {d} must be at least 2")));
    }
    Ok(qi(d as i64))
}

/// Named vertex for dimension d. P1, P2, Q1, Q2 and Q̃3 depend on β, P3 on
/// γ, Q3 on both; Q3 and Q̃3 exist only for d = 2.
pub fn vertex(name: VertexName, d: u32, beta: &Q, gamma: &Q) -> Result<RegionPoint> {
    let dq = check_d(d)?;
    check_dims(beta, gamma)?;
    let planar = || -> Result<()> {
        if d != 2 {
            return Err(Error::Domain(format!("{name:?} is defined only for d = 2")));
        }
        Ok(())
    };
    Ok(match name {
        VertexName::O => RegionPoint::origin(),
        VertexName::P1 | VertexName::Q1 => p1(&dq, beta),
        VertexName::P2 => p2(&dq, beta),
        VertexName::P3 => p3(&dq, gamma),
        VertexName::Q2 => q2(&dq, beta),
        VertexName::Q3 => {
            planar()?;
            q3(beta, gamma)?
        }
        VertexName::Q3Tilde => {
            planar()?;
            q3_tilde(beta)
        }
    })
}
