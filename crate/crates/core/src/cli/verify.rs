use num_traits::One;

use crate::error::Result;
use crate::fractal_set::{estimate_dimensions, FractalGenerator, FractalSet};
use crate::norm_probe::{run_probe, ProbeKind, ProbeParams, Verdict};
use crate::quadrature::QuadratureSpec;
use crate::radial_operator::{
    calibrate_normalization, monte_carlo_mean, normalization_constant, spherical_mean, RadialProfile,
};
use crate::rational::{pow2, q, qi, qpow, Q};
use crate::type_set_geometry::{critical_functional, region, vertex, RegionKind, VertexName};

/// One line of the verification table.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((pass, detail)) => Check { name, pass, detail },
        Err(e) => Check { name, pass: false, detail: e.to_string() },
    }
}

/// Fast property suite run by `radmax verify`.
pub fn default_suite(quad: &QuadratureSpec, seed: u64) -> Vec<Check> {
    vec![
        check("normalization", || {
            let one = RadialProfile::one();
            let grid = [0.125, 1.0, 8.0];
            let mut worst = 0.0f64;
            for d in 2..=5 {
                for r in grid {
                    for t in grid {
                        worst = worst.max((spherical_mean(d, &one, r, t, quad)? - 1.0).abs());
                    }
                }
            }
            Ok((worst <= 1e-6, format!("max error {worst:.2e}")))
        }),
        check("closed_form", || {
            let f = RadialProfile::monomial(1.0, 1.0, 0.0, qi(0), Some(qi(8)))?;
            let v = spherical_mean(3, &f, 1.0, 1.0, quad)?;
            Ok(((v - 4.0 / 3.0).abs() <= 1e-6, format!("{v:.10}")))
        }),
        check("normalization_constant", || {
            let c = calibrate_normalization(3, 1.0, 1.5, quad)?;
            let exact = normalization_constant(3);
            Ok(((c - exact).abs() <= 1e-6 && (exact - 2.0).abs() < 1e-12, format!("numeric {c:.10}")))
        }),
        check("monte_carlo", || {
            let f = RadialProfile::indicator(q(1, 2), q(5, 2))?;
            let mut worst = 0.0f64;
            for d in [2, 3] {
                let exact = spherical_mean(d, &f, 1.25, 1.5, quad)?;
                let mc = monte_carlo_mean(d, &f, 1.25, 1.5, 200_000, seed)?;
                worst = worst.max((exact - mc.mean).abs() / mc.std_error);
            }
            Ok((worst <= 4.0, format!("max |z| {worst:.2}")))
        }),
        check("binary_covering", || {
            let e = FractalSet::from_generator(FractalGenerator::MiddleCantor { alpha: q(1, 3), depth: 6 })?;
            for n in 0..=10i64 {
                let cover = e.covering_number(&pow2(-n))?;
                let binary = e.binary_covering_number(-n)?;
                let w = e.neighborhood_measure(n);
                let nq = Q::from_integer(cover.into());
                if !(cover <= binary && binary <= 3 * cover && pow2(-n - 2) * &nq <= w && w <= pow2(3 - n) * &nq) {
                    return Ok((false, format!("n = {n}")));
                }
            }
            Ok((true, "n = 0..10".into()))
        }),
        check("cantor_dimension", || {
            let e = FractalSet::from_generator(FractalGenerator::MiddleCantor { alpha: q(1, 3), depth: 8 })?;
            let scales: Vec<Q> = (1..=8).map(|k| qpow(&q(1, 3), k)).collect();
            let rep = estimate_dimensions(&e, &scales, &[0.5])?;
            let exact = 2f64.ln() / 3f64.ln();
            Ok(((rep.minkowski - exact).abs() <= 0.05, format!("{:.4}", rep.minkowski)))
        }),
        check("delta_vertices", || {
            let one = Q::one();
            let r = region(RegionKind::Delta, 3, &one, &one)?;
            let ok = r.vertices[1] == vertex(VertexName::Q2, 3, &one, &one)?
                && r.vertices[1].x == q(2, 3)
                && r.vertices[1].y == q(2, 9);
            Ok((ok, r.to_string()))
        }),
        check("degenerate_quadrilateral", || {
            let beta = q(1, 3);
            let gamma = (&beta + Q::one()) / qi(2);
            let a = region(RegionKind::Q, 2, &beta, &gamma)?;
            let b = region(RegionKind::Delta, 2, &beta, &gamma)?;
            Ok((a.vertices == b.vertices, a.to_string()))
        }),
        check("critical_functional_zeros", || {
            let (beta, gamma) = (q(1, 2), q(3, 4));
            let two_g = &gamma * qi(2) - Q::one();
            let a = vertex(VertexName::Q2, 2, &two_g, &two_g)?;
            let b = vertex(VertexName::Q3, 2, &beta, &gamma)?;
            let la = critical_functional(&beta, &gamma, &a.x, &a.y)?;
            let lb = critical_functional(&beta, &gamma, &b.x, &b.y)?;
            Ok((la == Q::from_integer(0.into()) && lb == Q::from_integer(0.into()), format!("L = {la}, {lb}")))
        }),
        check("annulus_probe", || {
            let e = FractalSet::from_generator(FractalGenerator::FullInterval)?;
            let scales: Vec<Q> = (4..=10).map(|k| pow2(-k)).collect();
            let p = ProbeParams::default();
            let crit = run_probe(ProbeKind::AnnulusDelta, &p, &e, 2, 2.0, 4.0, &scales, quad)?;
            let off = run_probe(ProbeKind::AnnulusDelta, &p, &e, 2, 2.0, 5.0, &scales, quad)?;
            Ok((
                crit.fitted_gap.abs() <= 0.05 && off.verdict == Verdict::ViolationDetected,
                format!("gaps {:.4}, {:.4}", crit.fitted_gap, off.fitted_gap),
            ))
        }),
    ]
}
