use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{qi, Q};

use super::point::{check_d, p1, q2, q3, RegionPoint};
use super::region::{dedup_cyclic, midpoint, on_segment, Status, TypeSetRegion};

/// Hypotheses on E beyond its dimensions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TypeSetFlags {
    /// sup_δ χ_{M,β}(δ) < ∞
    pub minkowski_char_bounded: bool,
    /// sup_δ χ_{A,γ}(δ) < ∞
    pub assouad_char_bounded: bool,
    /// Assouad spectrum constant equal to γ on (1 - β/γ, 1)
    pub quasi_assouad_regular: bool,
}

fn check_hypotheses(beta: &Q, gamma: &Q, gamma_star: &Q, flags: &TypeSetFlags) -> Result<()> {
    if !(Q::zero() <= *beta && beta <= gamma && gamma <= gamma_star && *gamma_star <= Q::one()) {
        return Err(Error::Domain(format!(
            "need 0 ≤ β ≤ γ ≤ γ* ≤ 1 (β = {beta}, γ = {gamma}, γ* = {gamma_star})"
        )));
    }
    if flags.quasi_assouad_regular && !gamma.is_zero() && gamma != gamma_star {
        return Err(Error::Consistency(format!(
            "quasi-Assouad regularity is taken to force γ* = γ (γ = {gamma}, γ* = {gamma_star})"
        )));
    }
    if flags.assouad_char_bounded && gamma != gamma_star {
        return Err(Error::Consistency(format!(
            "a bounded Assouad characteristic at γ = {gamma} forces the Assouad dimension γ* = {gamma_star} down to γ"
        )));
    }
    if flags.minkowski_char_bounded && beta.is_zero() && !gamma.is_zero() {
        return Err(Error::Consistency(
            "a bounded Minkowski characteristic at β = 0 means E is finite, so γ = 0".into(),
        ));
    }
    Ok(())
}

fn worst(a: Status, b: Status) -> Status {
    use Status::*;
    match (a, b) {
        (Excluded, _) | (_, Excluded) => Excluded,
        (Unknown, _) | (_, Unknown) => Unknown,
        (RestrictedWeakOnly, _) | (_, RestrictedWeakOnly) => RestrictedWeakOnly,
        _ => Included,
    }
}

/// Statuses in the plane when the boundary is only partly known.
struct PlanarRules {
    o: RegionPoint,
    q1: RegionPoint,
    q2_beta: RegionPoint,
    /// Last point of the q = 2p line known to be included (open end).
    line_end: RegionPoint,
    /// Q2(2γ*-1): beyond it on the line q = 2p strong type fails.
    necessary: RegionPoint,
    minkowski_bounded: bool,
}

impl PlanarRules {
    fn classify(&self, p: &RegionPoint) -> Status {
        if *p == self.o {
            return Status::Included;
        }
        let mut status: Option<Status> = None;
        let mut apply = |s: Status| status = Some(status.map_or(s, |cur| worst(cur, s)));
        if on_segment(p, &self.o, &self.q1) && *p != self.q1 {
            apply(Status::Included);
        }
        // the line q = 2p through O, Q2(·)
        if p.y.clone() * qi(2) == p.x {
            let far = |a: &RegionPoint, b: &RegionPoint| a.x > b.x;
            if far(&self.line_end, p) {
                apply(Status::Included);
            } else if *p == self.line_end {
                apply(Status::Unknown);
            }
            if far(p, &self.necessary) {
                apply(Status::Excluded);
            }
        }
        if on_segment(p, &self.q1, &self.q2_beta) {
            apply(if self.minkowski_bounded { Status::Unknown } else { Status::Excluded });
        }
        status.unwrap_or(Status::Unknown)
    }

    fn build(&self, label: String, vertices: Vec<RegionPoint>) -> TypeSetRegion {
        let vertices = dedup_cyclic(vertices);
        let n = vertices.len();
        let vertex_status = vertices.iter().map(|v| self.classify(v)).collect();
        let edge_status = (0..n)
            .map(|i| self.classify(&midpoint(&vertices[i], &vertices[(i + 1) % n])))
            .collect();
        TypeSetRegion { label, vertices, vertex_status, edge_status, interior: Status::Included, outer: None }
    }
}

/// The radial type set of M_E as far as the theorems determine it, given
/// β = upper Minkowski, γ = quasi-Assouad and γ* = Assouad dimension of E.
pub fn radial_type_set(
    d: u32,
    beta: &Q,
    gamma: &Q,
    gamma_star: &Q,
    flags: &TypeSetFlags,
) -> Result<TypeSetRegion> {
    let dq = check_d(d)?;
    check_hypotheses(beta, gamma, gamma_star, flags)?;
    let o = RegionPoint::origin();
    let q1b = p1(&dq, beta);
    let q2b = q2(&dq, beta);
    let delta = vec![o.clone(), q2b.clone(), q1b.clone()];
    let one = Q::one();

    let full = |label: String, verts: Vec<RegionPoint>| TypeSetRegion::closed(label, dedup_cyclic(verts));
    let minus_segment = |label: String| TypeSetRegion {
        label,
        vertices: delta.clone(),
        vertex_status: vec![Status::Included, Status::Excluded, Status::Excluded],
        edge_status: vec![Status::Included, Status::Excluded, Status::Included],
        interior: Status::Included,
        outer: None,
    };

    if *beta == one {
        return Ok(minus_segment(format!("Delta(1) minus [Q1(1),Q2(1)], d = {d}")));
    }
    if d >= 3 {
        return Ok(if flags.minkowski_char_bounded {
            full(format!("Delta({beta}), d = {d}"), delta)
        } else {
            minus_segment(format!("Delta({beta}) minus [Q1,Q2], d = {d}"))
        });
    }

    // d = 2, β < 1
    let two = qi(2);
    let two_g1 = &two * gamma - &one;
    let two_gs1 = &two * gamma_star - &one;
    let bounded = flags.minkowski_char_bounded && flags.assouad_char_bounded;
    let wide = two_g1 >= *beta;
    if !wide {
        if bounded {
            return Ok(full(format!("Delta({beta}), d = 2"), delta));
        }
        let end_param = if two_gs1 > *beta { two_gs1.clone() } else { beta.clone() };
        let rules = PlanarRules {
            o: o.clone(),
            q1: q1b.clone(),
            q2_beta: q2b.clone(),
            line_end: q2(&dq, &end_param),
            necessary: q2(&dq, &two_gs1.clone().max(-one.clone())),
            minkowski_bounded: flags.minkowski_char_bounded,
        };
        let mut verts = vec![o.clone()];
        if two_gs1 > *beta {
            verts.push(q2(&dq, &two_gs1));
        }
        verts.push(q2b.clone());
        verts.push(q1b.clone());
        return Ok(rules.build(format!("Delta({beta}) with partial boundary, d = 2"), verts));
    }

    let q2g = q2(&dq, &two_g1);
    let q3p = q3(beta, gamma)?;
    let qverts = vec![o.clone(), q2g.clone(), q3p, q1b.clone()];
    let mut out = if bounded {
        let mut r = full(format!("Q({beta},{gamma}), d = 2"), qverts);
        if let Some(k) = r.vertices.iter().position(|v| *v == q2g) {
            r.vertex_status[k] = Status::RestrictedWeakOnly;
        }
        r
    } else {
        let rules = PlanarRules {
            o: o.clone(),
            q1: q1b.clone(),
            q2_beta: q2b.clone(),
            line_end: q2(&dq, &two_gs1),
            necessary: q2(&dq, &two_gs1),
            minkowski_bounded: flags.minkowski_char_bounded,
        };
        let mut verts = vec![o.clone()];
        if two_gs1 > two_g1 {
            verts.push(q2(&dq, &two_gs1));
        }
        verts.extend(qverts.into_iter().skip(1));
        rules.build(format!("Q({beta},{gamma}) with partial boundary, d = 2"), verts)
    };
    if !flags.quasi_assouad_regular {
        let rules = PlanarRules {
            o: o.clone(),
            q1: q1b.clone(),
            q2_beta: q2b.clone(),
            line_end: q2(&dq, &two_gs1),
            necessary: q2(&dq, &two_gs1),
            minkowski_bounded: flags.minkowski_char_bounded,
        };
        let mut verts = vec![o];
        if two_gs1 > *beta {
            verts.push(q2(&dq, &two_gs1));
        }
        verts.push(q2b);
        verts.push(q1b);
        let mut outer = rules.build(format!("Delta({beta}) outer bound"), verts);
        outer.interior = Status::Unknown;
        out.outer = Some(Box::new(outer));
    }
    Ok(out)
}
