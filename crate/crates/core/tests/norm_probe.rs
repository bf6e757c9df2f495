use radmax::fractal_set::{FractalSet, Interval};
use radmax::norm_probe::{
    build_probe, endpoint_log_probe, log_thinned_set, lorentz_log_probe, measure_probe, run_probe, ProbeKind,
    ProbeParams, Verdict,
};
use radmax::quadrature::QuadratureSpec;
use radmax::radial_operator::{maximal_value, DilationGrid};
use radmax::rational::{pow2, q, qi};
use radmax::{Error, Q};

fn quad() -> QuadratureSpec {
    QuadratureSpec { rel_tol: 1e-8, ..QuadratureSpec::default() }
}

fn set(s: &str) -> FractalSet {
    FractalSet::parse(s).unwrap()
}

fn dyadic(k0: i64, k1: i64) -> Vec<Q> {
    (k0..=k1).map(|k| pow2(-k)).collect()
}

#[test]
fn kind_names_round_trip() {
    for k in ["ball", "annulus", "smallball", "stein", "endpoint", "lorentz", "local"] {
        let kind: ProbeKind = k.parse().unwrap();
        assert_eq!(kind.to_string(), k);
    }
    assert!("sphere".parse::<ProbeKind>().is_err());
}

#[test]
fn annulus_instance() {
    let params = ProbeParams { center: Some(q(3, 2)), ..ProbeParams::default() };
    let p = build_probe(ProbeKind::AnnulusDelta, &params, &set("points(3/2)"), 2, &q(1, 16)).unwrap();
    assert_eq!(p.profile, radmax::radial_operator::RadialProfile::indicator(q(23, 16), q(25, 16)).unwrap());
    assert_eq!(p.witness.radii, vec![(0.0, 1.0 / 16.0)]);
    let bad = ProbeParams { center: Some(q(5, 4)), ..ProbeParams::default() };
    assert!(build_probe(ProbeKind::AnnulusDelta, &bad, &set("points(3/2)"), 2, &q(1, 16)).is_err());
}

#[test]
fn ball_instance() {
    let p = build_probe(ProbeKind::BallR, &ProbeParams::default(), &set("interval"), 3, &q(1, 8)).unwrap();
    assert_eq!(p.profile, radmax::radial_operator::RadialProfile::indicator(qi(0), qi(8)).unwrap());
    assert_eq!(p.witness.radii, vec![(0.0, 4.0)]);
    assert!(matches!(
        build_probe(ProbeKind::BallR, &ProbeParams::default(), &set("interval"), 3, &q(1, 2)),
        Err(Error::InvalidScale(_))
    ));
}

#[test]
fn local_annulus_instance() {
    let e = set("progression(u=5/4, delta=1/64, m=8)");
    let window = Interval::new(q(5, 4), q(11, 8));
    let params = ProbeParams { window: Some(window), ..ProbeParams::default() };
    let p = build_probe(ProbeKind::LocalAnnulus, &params, &e, 2, &q(1, 64)).unwrap();
    let m = 8;
    assert!(2 * p.witness.radii.len() >= m);
    for (a, b) in &p.witness.radii {
        assert!((b - a - 1.0 / 128.0).abs() < 1e-15);
    }
    let empty = ProbeParams { window: Some(Interval::new(q(3, 2), q(13, 8))), ..ProbeParams::default() };
    assert!(matches!(build_probe(ProbeKind::LocalAnnulus, &empty, &e, 2, &q(1, 64)), Err(Error::DegenerateProbe(_))));
    assert!(matches!(
        build_probe(ProbeKind::LocalAnnulus, &ProbeParams::default(), &e, 2, &q(1, 64)),
        Err(Error::Parameter { .. })
    ));
}

#[test]
fn other_domains() {
    let e = set("interval");
    let none = ProbeParams::default();
    assert!(build_probe(ProbeKind::SteinLog, &none, &e, 2, &q(3, 4)).is_err());
    assert!(build_probe(ProbeKind::EndpointLog, &none, &e, 3, &q(1, 3)).is_err());
    assert!(build_probe(ProbeKind::EndpointLog, &none, &e, 3, &q(1, 16)).is_ok());
    assert!(build_probe(ProbeKind::Lorentz2D, &none, &e, 3, &q(1, 16)).is_err());
    assert!(build_probe(ProbeKind::Lorentz2D, &none, &set("cantor(1/3, 3)"), 2, &q(1, 16)).is_err());
    assert!(build_probe(ProbeKind::BallR, &none, &e, 1, &q(1, 8)).is_err());
}

#[test]
fn annulus_is_critical_on_the_line() {
    let e = set("points(3/2)");
    let params = ProbeParams { center: Some(q(3, 2)), dims: Some((0.0, 0.0, 0.0)), ..ProbeParams::default() };
    let r = run_probe(ProbeKind::AnnulusDelta, &params, &e, 2, 2.0, 4.0, &dyadic(4, 10), &quad()).unwrap();
    assert!(r.fitted_gap.abs() < 0.1, "{}", r.fitted_gap);
    assert!(r.residual < 0.05);
    assert!((r.fitted_input - 0.5).abs() < 0.02);
    assert!(r.rows.windows(2).all(|w| w[0].scale > w[1].scale));

    let r = run_probe(ProbeKind::AnnulusDelta, &params, &e, 2, 2.0, 8.0, &dyadic(4, 10), &quad()).unwrap();
    assert_eq!(r.verdict, Verdict::ViolationDetected);
    let r = run_probe(ProbeKind::AnnulusDelta, &params, &e, 2, 2.0, 2.0, &dyadic(4, 10), &quad()).unwrap();
    assert_eq!(r.verdict, Verdict::Consistent);
}

#[test]
fn ball_needs_p_at_most_q() {
    let e = set("interval");
    let scales: Vec<Q> = (3..=8).map(|k| pow2(-k)).collect();
    let none = ProbeParams { dims: Some((1.0, 1.0, 1.0)), ..ProbeParams::default() };
    let bad = run_probe(ProbeKind::BallR, &none, &e, 3, 3.0, 2.0, &scales, &quad()).unwrap();
    assert_eq!(bad.verdict, Verdict::ViolationDetected);
    assert!(bad.residual < 0.05);
    let good = run_probe(ProbeKind::BallR, &none, &e, 3, 2.0, 3.0, &scales, &quad()).unwrap();
    assert_eq!(good.verdict, Verdict::Consistent);
}

#[test]
fn output_is_a_lower_bound() {
    let e = set("points(3/2)");
    let params = ProbeParams { center: Some(q(3, 2)), ..ProbeParams::default() };
    let quad = quad();
    let ms = measure_probe(ProbeKind::AnnulusDelta, &params, &e, 2, &dyadic(4, 7), &quad).unwrap();
    let grid = DilationGrid::from_points(&[1.5]).unwrap();
    for m in &ms {
        let full = m
            .instance
            .witness
            .samples
            .iter()
            .map(|(r, _)| maximal_value(2, &m.instance.profile, *r, &grid, &quad).unwrap().value)
            .fold(f64::INFINITY, f64::min);
        assert!(m.lambda <= full + 1e-12);
    }
}

#[test]
fn csv_and_summary() {
    let e = set("points(3/2)");
    let params = ProbeParams { center: Some(q(3, 2)), dims: Some((0.0, 0.0, 0.0)), ..ProbeParams::default() };
    let r = run_probe(ProbeKind::AnnulusDelta, &params, &e, 2, 2.0, f64::INFINITY, &dyadic(4, 6), &quad()).unwrap();
    let csv = r.to_csv();
    assert!(csv.starts_with("scale,scale_f64,input_norm,lambda,witness_measure,output,ratio\n"));
    assert_eq!(csv.lines().count(), 4);
    assert!(r.summary_line().starts_with("annulus,"));
}

#[test]
fn endpoint_values_grow_linearly() {
    let rows = endpoint_log_probe(3, 3.0, &set("interval"), &[4, 6, 8, 10], &quad()).unwrap();
    let c: Vec<f64> = rows.iter().map(|r| r.value_over_n).collect();
    let (lo, hi) = c.iter().fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(*v), b.max(*v)));
    assert!(lo > 0.0 && hi / lo < 1.5, "{c:?}");
    let finite = endpoint_log_probe(3, 3.0, &set("points(5/4, 7/4)"), &[4, 6, 8], &quad()).unwrap();
    let counts: Vec<f64> = finite.iter().map(|r| r.count_criterion).collect();
    assert!(counts.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{counts:?}");
}

#[test]
fn thinned_sets_follow_their_counts() {
    let (qe, d) = (4.5, 3);
    let e = log_thinned_set(qe, d, 10).unwrap();
    for n in 3..=10i64 {
        let target = (2f64.powi(n as i32) * (n as f64).powf(-qe / d as f64)).ceil() as u64;
        let n_cover = e.covering_number(&pow2(-n)).unwrap();
        assert!(n_cover as f64 <= 3.0 * target as f64 + 2.0 && 3 * n_cover + 2 >= target, "n={n}: {n_cover} vs {target}");
    }
}

#[test]
fn lorentz_growth_is_logarithmic() {
    let rows = lorentz_log_probe(4.0, &dyadic(4, 9), &quad()).unwrap();
    let r: Vec<f64> = rows.iter().map(|x| x.ratio_over_log).collect();
    let (lo, hi) = r.iter().fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(*v), b.max(*v)));
    assert!(lo > 0.0 && hi / lo < 2.5, "{r:?}");
    let w: Vec<f64> = rows.iter().map(|x| x.weak_sup).collect();
    let (wl, wh) = w.iter().fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(*v), b.max(*v)));
    assert!(wh / wl < 1.5, "{w:?}");
}
