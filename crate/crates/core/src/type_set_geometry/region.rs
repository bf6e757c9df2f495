use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{qi, to_f64, Q};

use super::point::{check_d, check_dims, p1, p2, p3, q2, q3, q3_tilde, RegionPoint};

/// Whether a boundary element (or the interior) belongs to the type set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Included,
    /// Only restricted weak type holds.
    RestrictedWeakOnly,
    Excluded,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Included => "included",
            Status::RestrictedWeakOnly => "restricted-weak-only",
            Status::Excluded => "excluded",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    Interior,
    BoundaryIncluded,
    BoundaryRestrictedWeak,
    BoundaryExcluded,
    BoundaryUnknown,
    /// Between the proven inner region and the known outer bound.
    Undetermined,
    Outside,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::Interior => "interior",
            Membership::BoundaryIncluded => "boundary-included",
            Membership::BoundaryRestrictedWeak => "boundary-restricted-weak",
            Membership::BoundaryExcluded => "boundary-excluded",
            Membership::BoundaryUnknown => "boundary-unknown",
            Membership::Undetermined => "undetermined",
            Membership::Outside => "outside",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    /// Δ(β) = conv{O, Q1(β), Q2(β)}
    Delta,
    /// 𝒫(β,γ) = conv{O, P1(β), P2(β), P3(γ)}
    P,
    /// 𝒬(β,γ) = conv{O, Q1(β), Q3(β,γ), Q2(2γ-1)}, d = 2
    Q,
    /// 𝒬̃(β,γ) = conv{O, Q1(β), Q̃3(β), Q2(2γ-1)}, d = 2
    QTilde,
}

impl FromStr for RegionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "delta" => RegionKind::Delta,
            "p" => RegionKind::P,
            "q" => RegionKind::Q,
            "qtilde" | "q~" => RegionKind::QTilde,
            _ => return Err(Error::Parse(format!("unknown region kind `{s}`"))),
        })
    }
}

/// Closed convex polygon, vertices counter-clockwise from O, with a status
/// for every vertex, every edge (v_i → v_{i+1}) and the interior.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeSetRegion {
    pub label: String,
    pub vertices: Vec<RegionPoint>,
    pub vertex_status: Vec<Status>,
    pub edge_status: Vec<Status>,
    pub interior: Status,
    /// Known outer bound when the type set may exceed this polygon.
    pub outer: Option<Box<TypeSetRegion>>,
}

pub(crate) fn dedup_cyclic(mut v: Vec<RegionPoint>) -> Vec<RegionPoint> {
    v.dedup();
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    v
}

fn cross(o: &RegionPoint, a: &RegionPoint, b: &RegionPoint) -> Q {
    let (ax, ay) = a.sub(o);
    let (bx, by) = b.sub(o);
    ax * by - ay * bx
}

impl TypeSetRegion {
    pub(crate) fn closed(label: String, vertices: Vec<RegionPoint>) -> Self {
        let n = vertices.len();
        TypeSetRegion {
            label,
            vertices,
            vertex_status: vec![Status::Included; n],
            edge_status: vec![Status::Included; n],
            interior: Status::Included,
            outer: None,
        }
    }

    pub fn edge(&self, i: usize) -> (&RegionPoint, &RegionPoint) {
        let n = self.vertices.len();
        (&self.vertices[i], &self.vertices[(i + 1) % n])
    }

    /// Non-strict convexity with counter-clockwise orientation.
    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return false;
        }
        let mut any_positive = false;
        for i in 0..n {
            let c = cross(&self.vertices[i], &self.vertices[(i + 1) % n], &self.vertices[(i + 2) % n]);
            if c.is_negative() {
                return false;
            }
            any_positive |= c.is_positive();
        }
        any_positive
    }

    /// Twice the signed area (shoelace).
    pub fn double_area(&self) -> Q {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = self.edge(i);
                &a.x * &b.y - &b.x * &a.y
            })
            .sum()
    }

    pub fn contains_closed(&self, p: &RegionPoint) -> bool {
        (0..self.vertices.len()).all(|i| {
            let (a, b) = self.edge(i);
            !cross(a, b, p).is_negative()
        })
    }

    fn locate(&self, p: &RegionPoint) -> Option<Membership> {
        let n = self.vertices.len();
        let mut on_edge: Option<usize> = None;
        for i in 0..n {
            let (a, b) = self.edge(i);
            let c = cross(a, b, p);
            if c.is_negative() {
                return None;
            }
            if c.is_zero() && on_edge.is_none() {
                let (dx, dy) = b.sub(a);
                let (px, py) = p.sub(a);
                let dot = &dx * &px + &dy * &py;
                let len2 = &dx * &dx + &dy * &dy;
                if !dot.is_negative() && dot <= len2 {
                    on_edge = Some(i);
                }
            }
        }
        let status = match on_edge {
            None => {
                return Some(match self.interior {
                    Status::Included => Membership::Interior,
                    Status::Unknown => Membership::Undetermined,
                    Status::Excluded => Membership::Outside,
                    Status::RestrictedWeakOnly => Membership::BoundaryRestrictedWeak,
                })
            }
            Some(i) => match self.vertices.iter().position(|v| v == p) {
                Some(k) => self.vertex_status[k],
                None => self.edge_status[i],
            },
        };
        Some(match status {
            Status::Included => Membership::BoundaryIncluded,
            Status::RestrictedWeakOnly => Membership::BoundaryRestrictedWeak,
            Status::Excluded => Membership::BoundaryExcluded,
            Status::Unknown => Membership::BoundaryUnknown,
        })
    }

    pub fn vertices_csv(&self) -> String {
        let mut s = String::from("index,x,y,x_f64,y_f64,status\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let (x, y) = v.to_f64();
            s += &format!("{i},{},{},{x:.12},{y:.12},{}\n", v.x, v.y, self.vertex_status[i]);
        }
        s
    }

    pub fn boundary_csv(&self) -> String {
        let mut s = String::from("element,from,to,status\n");
        for i in 0..self.vertices.len() {
            let (a, b) = self.edge(i);
            s += &format!("edge{i},\"{a}\",\"{b}\",{}\n", self.edge_status[i]);
        }
        s += &format!("interior,,,{}\n", self.interior);
        s
    }

    /// Closed polyline (first vertex repeated) as `x y` lines.
    pub fn polyline(&self) -> String {
        let mut s = String::new();
        for v in self.vertices.iter().chain(self.vertices.first()) {
            s += &format!("{:.12} {:.12}\n", to_f64(&v.x), to_f64(&v.y));
        }
        s
    }
}

impl fmt::Display for TypeSetRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vertices.iter().map(|p| p.to_string()).collect();
        write!(f, "{}: {}", self.label, v.join(", "))
    }
}

/// The polygon of the given kind, all boundary closed.
pub fn region(kind: RegionKind, d: u32, beta: &Q, gamma: &Q) -> Result<TypeSetRegion> {
    let dq = check_d(d)?;
    check_dims(beta, gamma)?;
    let o = RegionPoint::origin();
    let two_g_minus_1 = qi(2) * gamma - Q::one();
    let planar = || -> Result<()> {
        if d != 2 {
            return Err(Error::Domain(format!("{kind:?} is defined only for d = 2")));
        }
        if two_g_minus_1 < *beta {
            return Err(Error::Domain(format!(
                "{kind:?} needs β + 1 ≤ 2γ (β = {beta}, γ = {gamma})"
            )));
        }
        Ok(())
    };
    let (label, verts) = match kind {
        RegionKind::Delta => (format!("Delta({beta})"), vec![o, q2(&dq, beta), p1(&dq, beta)]),
        RegionKind::P => (
            format!("P({beta},{gamma})"),
            vec![o, p3(&dq, gamma), p2(&dq, beta), p1(&dq, beta)],
        ),
        RegionKind::Q => {
            planar()?;
            (
                format!("Q({beta},{gamma})"),
                vec![o, q2(&dq, &two_g_minus_1), q3(beta, gamma)?, p1(&dq, beta)],
            )
        }
        RegionKind::QTilde => {
            planar()?;
            (
                format!("Qtilde({beta},{gamma})"),
                vec![o, q2(&dq, &two_g_minus_1), q3_tilde(beta), p1(&dq, beta)],
            )
        }
    };
    Ok(TypeSetRegion::closed(label, dedup_cyclic(verts)))
}

/// Classify (1/p, 1/q); `None` stands for p = ∞ or q = ∞.
pub fn membership(region: &TypeSetRegion, p: Option<&Q>, q: Option<&Q>) -> Result<Membership> {
    let inv = |v: Option<&Q>, name: &str| -> Result<Q> {
        match v {
            None => Ok(Q::zero()),
            Some(v) if *v >= Q::one() => Ok(v.recip()),
            Some(v) => Err(Error::Domain(format!("{name} = {v} must be at least 1"))),
        }
    };
    let pt = RegionPoint::new(inv(p, "p")?, inv(q, "q")?);
    if let Some(m) = region.locate(&pt) {
        return Ok(m);
    }
    if let Some(outer) = &region.outer {
        if let Some(m) = outer.locate(&pt) {
            return Ok(match m {
                Membership::BoundaryExcluded => Membership::BoundaryExcluded,
                _ => Membership::Undetermined,
            });
        }
    }
    Ok(Membership::Outside)
}

/// Point on segment [a, b] (inclusive) test.
pub(crate) fn on_segment(p: &RegionPoint, a: &RegionPoint, b: &RegionPoint) -> bool {
    if !cross(a, b, p).is_zero() {
        return false;
    }
    let (dx, dy) = b.sub(a);
    let (px, py) = p.sub(a);
    let dot = &dx * &px + &dy * &py;
    let len2 = &dx * &dx + &dy * &dy;
    !dot.is_negative() && dot <= len2
}

pub(crate) fn midpoint(a: &RegionPoint, b: &RegionPoint) -> RegionPoint {
    a.lerp(b, &(Q::one() / qi(2)))
}
