use proptest::prelude::*;
use radmax::fractal_set::FractalSet;
use radmax::quadrature::QuadratureSpec;
use radmax::radial_operator::{maximal_value, spherical_mean, DilationGrid, RadialProfile};
use radmax::rational::{pow2, q, qi};
use radmax::type_set_geometry::{membership, region, Membership, RegionKind};
use radmax::Q;

fn points(ks: &[i64]) -> String {
    let body: Vec<String> = ks.iter().map(|k| format!("{}/256", 256 + k)).collect();
    format!("points({})", body.join(", "))
}

/// Random sets: finite point sets, Cantor sets and unions with intervals.
fn any_set() -> impl Strategy<Value = String> {
    prop_oneof![
        prop::collection::vec(0i64..=256, 1..20).prop_map(|ks| points(&ks)),
        (1i64..=7, 1u32..=5).prop_map(|(a, k)| format!("cantor({a}/8, {k})")),
        (prop::collection::vec(0i64..=256, 1..8), 0i64..200, 1i64..56).prop_map(|(ks, lo, len)| {
            format!("union({}, progression(u={}/256, delta=1/256, m={len}))", points(&ks), 256 + lo)
        }),
    ]
}

fn parse(s: &str) -> FractalSet {
    FractalSet::parse(s).unwrap()
}

fn delta_from(k: u32) -> Q {
    q(1, 1 << k.min(12))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn covering_is_monotone(s in any_set(), a in 1u32..12, b in 1u32..12) {
        let e = parse(&s);
        let (fine, coarse) = (delta_from(a.max(b)), delta_from(a.min(b)));
        prop_assert!(e.covering_number(&fine).unwrap() >= e.covering_number(&coarse).unwrap());
    }

    #[test]
    fn covering_is_subadditive(a in any_set(), b in any_set(), k in 1u32..12) {
        let (ea, eb) = (parse(&a), parse(&b));
        let u = parse(&format!("union({a}, {b})"));
        let d = delta_from(k);
        prop_assert!(u.covering_number(&d).unwrap() <= ea.covering_number(&d).unwrap() + eb.covering_number(&d).unwrap());
    }

    #[test]
    fn binary_and_greedy_counts_are_comparable(s in any_set(), j in -12i64..=0) {
        let e = parse(&s);
        let n = e.covering_number(&pow2(j)).unwrap();
        let b = e.binary_covering_number(j).unwrap();
        prop_assert!(n <= b && b <= 2 * n, "N = {}, binary = {}", n, b);
    }

    #[test]
    fn annuli_telescope(s in any_set(), a in -2i64..6, len in 1i64..8) {
        let e = parse(&s);
        let sum: Q = (a..a + len).map(|n| e.annulus_measure(n)).sum();
        prop_assert_eq!(sum, e.neighborhood_measure(a) - e.neighborhood_measure(a + len));
        for n in a..a + len {
            prop_assert!(e.annulus_measure(n) >= qi(0));
        }
    }

    #[test]
    fn local_count_is_bounded_by_global(s in any_set(), lo in 0i64..192, w in 16i64..64, k in 4u32..10) {
        let e = parse(&s);
        let win = radmax::fractal_set::Interval::new(q(256 + lo, 256), q(256 + lo + w, 256));
        let d = delta_from(k);
        if win.len() >= d {
            prop_assert!(e.local_covering_number(&win, &d).unwrap() <= e.covering_number(&d).unwrap());
        }
    }
}

fn unit_rational() -> impl Strategy<Value = Q> {
    (0i64..=12).prop_map(|n| q(n, 12))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn delta_regions_nest(d in 2u32..6, a in unit_rational(), b in unit_rational()) {
        let (big, small) = if a <= b { (a, b) } else { (b, a) };
        let outer = region(RegionKind::Delta, d, &big, &big).unwrap();
        let inner = region(RegionKind::Delta, d, &small, &small).unwrap();
        for v in &inner.vertices {
            prop_assert!(outer.contains_closed(v));
        }
    }

    #[test]
    fn vertices_lie_in_the_admissible_triangle(d in 2u32..6, a in unit_rational(), b in unit_rational()) {
        let (beta, gamma) = if a <= b { (a, b) } else { (b, a) };
        let mut kinds = vec![RegionKind::Delta, RegionKind::P];
        if d == 2 && qi(2) * &gamma - qi(1) >= beta {
            kinds.push(RegionKind::Q);
            kinds.push(RegionKind::QTilde);
        }
        for kind in kinds {
            let r = match region(kind, d, &beta, &gamma) {
                Ok(r) => r,
                Err(_) if kind == RegionKind::Q => continue,
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            for v in &r.vertices {
                prop_assert!(qi(0) <= v.y && v.y <= v.x && v.x <= qi(1), "{:?} {}", kind, v);
            }
        }
    }

    #[test]
    fn general_region_sits_inside_delta(d in 2u32..6, a in unit_rational(), b in unit_rational()) {
        let (beta, gamma) = if a <= b { (a, b) } else { (b, a) };
        let delta = region(RegionKind::Delta, d, &beta, &gamma).unwrap();
        let p = region(RegionKind::P, d, &beta, &gamma).unwrap();
        for v in &p.vertices {
            let inv = |x: &Q| if x == &qi(0) { None } else { Some(x.recip()) };
            let m = membership(&delta, inv(&v.x).as_ref(), inv(&v.y).as_ref()).unwrap();
            prop_assert_ne!(m, Membership::Outside);
        }
    }

    #[test]
    fn q_region_sits_inside_delta((b, g) in (0i64..=12).prop_flat_map(|b| (Just(b), (b + 12 + 1) / 2..=12))) {
        let (beta, gamma) = (q(b, 12), q(g, 12));
        if let Ok(qr) = region(RegionKind::Q, 2, &beta, &gamma) {
            let delta = region(RegionKind::Delta, 2, &beta, &gamma).unwrap();
            for v in &qr.vertices {
                prop_assert!(delta.contains_closed(v));
            }
            let equal = qr.vertices == delta.vertices;
            prop_assert_eq!(equal, qi(2) * &gamma == &beta + qi(1));
        }
    }
}

fn small_profile() -> impl Strategy<Value = RadialProfile> {
    (1i64..8, 1i64..8, -1i64..3).prop_map(|(a, w, pw)| {
        let lo = q(a, 4);
        let hi = &lo + q(w, 4);
        RadialProfile::monomial(1.0, pw as f64, 0.0, lo, Some(hi)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn means_are_order_preserving(f in small_profile(), g in small_profile(), d in 2u32..5, r in 0.1f64..3.0, t in 0.5f64..2.5) {
        let quad = QuadratureSpec::default();
        let sum = f.sum(&g);
        let a = spherical_mean(d, &sum, r, t, &quad).unwrap();
        let b = spherical_mean(d, &f, r, t, &quad).unwrap();
        prop_assert!(a >= b - 1e-9);
        let c = spherical_mean(d, &g, r, t, &quad).unwrap();
        prop_assert!((a - b - c).abs() < 1e-8 * a.max(1.0));
    }

    #[test]
    fn maximal_value_is_sublinear(f in small_profile(), g in small_profile(), c in -3.0f64..3.0, r in 0.1f64..3.0) {
        let quad = QuadratureSpec::default();
        let grid = DilationGrid::from_set(&parse("cantor(1/3, 3)"), &q(1, 27)).unwrap();
        // the refined value comes from a local search, so sublinearity is exact on the grid only
        let mf = maximal_value(3, &f, r, &grid, &quad).unwrap();
        let mg = maximal_value(3, &g, r, &grid, &quad).unwrap();
        let mfg = maximal_value(3, &f.sum(&g), r, &grid, &quad).unwrap();
        prop_assert!(mfg.grid_value <= mf.grid_value + mg.grid_value + 1e-9);
        prop_assert!(mfg.value >= mfg.grid_value);
        let mcf = maximal_value(3, &f.scaled(c), r, &grid, &quad).unwrap().value;
        prop_assert!((mcf - c.abs() * mf.value).abs() < 1e-8 * mf.value.max(1.0));
    }

    #[test]
    fn means_are_symmetric(f in small_profile(), d in 2u32..5, r in 0.2f64..2.5, t in 0.2f64..2.5) {
        let quad = QuadratureSpec::default();
        let a = spherical_mean(d, &f, r, t, &quad).unwrap();
        let b = spherical_mean(d, &f, t, r, &quad).unwrap();
        prop_assert!((a - b).abs() < 1e-7 * a.abs().max(1.0), "{} vs {}", a, b);
    }
}
