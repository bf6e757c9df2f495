use num_traits::Zero;
use radmax::rational::{q, qi};
use radmax::type_set_geometry::{
    critical_functional, membership, predicted_probe_exponents, radial_type_set, region, vertex, Membership,
    ProbeFamily, RegionKind, RegionPoint, Status, TypeSetFlags, VertexName,
};
use radmax::{Error, Q};

fn pt(x: Q, y: Q) -> RegionPoint {
    RegionPoint::new(x, y)
}

fn flags(m: bool, a: bool, r: bool) -> TypeSetFlags {
    TypeSetFlags { minkowski_char_bounded: m, assouad_char_bounded: a, quasi_assouad_regular: r }
}

#[test]
fn named_vertices() {
    let one = qi(1);
    assert_eq!(vertex(VertexName::Q2, 3, &one, &one).unwrap(), pt(q(2, 3), q(2, 9)));
    assert_eq!(vertex(VertexName::Q2, 2, &one, &one).unwrap(), pt(q(1, 2), q(1, 4)));
    assert_eq!(vertex(VertexName::P3, 2, &qi(0), &one).unwrap(), pt(q(2, 5), q(1, 5)));
    assert_eq!(vertex(VertexName::Q3, 2, &qi(0), &one).unwrap(), pt(q(2, 3), q(1, 3)));
    assert!(vertex(VertexName::Q3, 3, &qi(0), &one).is_err());
    assert!(vertex(VertexName::Q3, 2, &q(1, 2), &q(1, 2)).is_err());
    assert!(vertex(VertexName::Q1, 2, &q(3, 4), &q(1, 2)).is_err());
}

#[test]
fn polygons() {
    let r = region(RegionKind::Delta, 3, &qi(1), &qi(1)).unwrap();
    assert_eq!(r.vertices, vec![RegionPoint::origin(), pt(q(2, 3), q(2, 9)), pt(q(2, 3), q(2, 3))]);
    assert!(r.is_convex());

    let r = region(RegionKind::Delta, 3, &qi(0), &qi(0)).unwrap();
    assert_eq!(r.vertices, vec![RegionPoint::origin(), pt(q(3, 4), q(1, 4)), pt(qi(1), qi(1))]);

    let p = region(RegionKind::P, 2, &qi(1), &qi(1)).unwrap();
    assert_eq!(p.vertices.len(), 3);

    for b in [q(0, 1), q(1, 3), q(1, 2), q(3, 4)] {
        let g = (&b + qi(1)) / qi(2);
        let qr = region(RegionKind::Q, 2, &b, &g).unwrap();
        let dr = region(RegionKind::Delta, 2, &b, &g).unwrap();
        assert_eq!(qr.vertices, dr.vertices, "β = {b}");
    }
    let qr = region(RegionKind::Q, 2, &q(1, 3), &q(5, 6)).unwrap();
    assert_eq!(qr.vertices.len(), 4);
    assert!(matches!(region(RegionKind::Q, 2, &q(1, 2), &q(1, 2)), Err(Error::Domain(_))));
    assert!(region(RegionKind::Q, 3, &q(1, 2), &qi(1)).is_err());
}

#[test]
fn membership_on_polygons() {
    let r = region(RegionKind::Delta, 3, &qi(1), &qi(1)).unwrap();
    assert_eq!(membership(&r, Some(&qi(2)), Some(&qi(3))).unwrap(), Membership::Interior);
    assert_eq!(membership(&r, Some(&qi(2)), Some(&qi(2))).unwrap(), Membership::BoundaryIncluded);
    assert_eq!(membership(&r, None, None).unwrap(), Membership::BoundaryIncluded);
    assert_eq!(membership(&r, Some(&qi(1)), Some(&qi(1))).unwrap(), Membership::Outside);
    assert!(membership(&r, Some(&q(1, 2)), None).is_err());
}

#[test]
fn interval_theorem() {
    let one = qi(1);
    for d in [3, 4] {
        let r = radial_type_set(d, &one, &one, &one, &flags(true, true, true)).unwrap();
        assert_eq!(r.vertex_status, vec![Status::Included, Status::Excluded, Status::Excluded]);
        assert_eq!(r.edge_status[1], Status::Excluded);
    }
    let r3 = radial_type_set(3, &one, &one, &one, &flags(false, false, false)).unwrap();
    let t = q(3, 2);
    assert_eq!(membership(&r3, Some(&t), Some(&t)).unwrap(), Membership::BoundaryExcluded);
    assert_eq!(membership(&r3, Some(&qi(2)), Some(&qi(2))).unwrap(), Membership::BoundaryIncluded);
    assert_eq!(membership(&r3, None, None).unwrap(), Membership::BoundaryIncluded);

    let r2 = radial_type_set(2, &one, &one, &one, &flags(true, true, true)).unwrap();
    let d2 = region(RegionKind::Delta, 2, &one, &one).unwrap();
    assert_eq!(r2.vertices, d2.vertices);
    assert_eq!(r2.vertex_status, r3.vertex_status);
}

#[test]
fn planar_endpoint_case() {
    let z = Q::zero();
    let r = radial_type_set(2, &z, &z, &z, &flags(true, true, false)).unwrap();
    assert_eq!(r.vertices, region(RegionKind::Delta, 2, &z, &z).unwrap().vertices);
    assert!(r.vertex_status.iter().chain(&r.edge_status).all(|s| *s == Status::Included));
}

#[test]
fn planar_wide_case_marks_restricted_weak() {
    let (b, g) = (q(1, 3), q(5, 6));
    let r = radial_type_set(2, &b, &g, &g, &flags(true, true, true)).unwrap();
    let q2 = vertex(VertexName::Q2, 2, &(qi(2) * &g - qi(1)), &g).unwrap();
    let i = r.vertices.iter().position(|v| *v == q2).expect("Q2(2γ-1) is a vertex");
    assert_eq!(r.vertex_status[i], Status::RestrictedWeakOnly);
}

#[test]
fn inconsistent_hypotheses() {
    let (b, g, gs) = (q(1, 2), q(3, 4), qi(1));
    assert!(matches!(radial_type_set(2, &b, &g, &gs, &flags(false, false, true)), Err(Error::Consistency(_))));
    assert!(matches!(radial_type_set(2, &b, &g, &gs, &flags(false, true, false)), Err(Error::Consistency(_))));
    assert!(matches!(
        radial_type_set(2, &qi(0), &g, &g, &flags(true, false, false)),
        Err(Error::Consistency(_))
    ));
    assert!(matches!(radial_type_set(2, &g, &b, &gs, &flags(false, false, false)), Err(Error::Domain(_))));
}

#[test]
fn critical_functional_zeros() {
    for (b, g) in [(q(1, 3), q(5, 6)), (q(0, 1), q(3, 4)), (q(1, 2), q(7, 8))] {
        let at = |v: RegionPoint| critical_functional(&b, &g, &v.x, &v.y).unwrap();
        let q2 = vertex(VertexName::Q2, 2, &(qi(2) * &g - qi(1)), &g).unwrap();
        let q3 = vertex(VertexName::Q3, 2, &b, &g).unwrap();
        let q1 = vertex(VertexName::Q1, 2, &(qi(2) * &g - qi(1)), &g).unwrap();
        assert!(at(q2).is_zero());
        assert!(at(q3).is_zero());
        assert!(!at(q1).is_zero());
    }
    assert!(critical_functional(&qi(0), &qi(0), &qi(0), &qi(0)).is_err());
}

#[test]
fn predicted_gaps() {
    let e = predicted_probe_exponents(2, 1.0, 1.0, 1.0, 2.0, 4.0, ProbeFamily::AnnulusDelta).unwrap();
    assert!(e.gap.abs() < 1e-15);
    let e = predicted_probe_exponents(2, 1.0, 1.0, 1.0, 2.0, 5.0, ProbeFamily::AnnulusDelta).unwrap();
    assert!((e.gap + 0.1).abs() < 1e-12);

    // zero along the line through Q1(β), Q2(β)
    let (d, beta) = (3u32, 0.5);
    let (q1, q2) = (vertex(VertexName::Q1, d, &q(1, 2), &q(1, 2)).unwrap(), vertex(VertexName::Q2, d, &q(1, 2), &q(1, 2)).unwrap());
    for s in [0.0, 0.3, 1.0] {
        let x = (1.0 - s) * q1.to_f64().0 + s * q2.to_f64().0;
        let y = (1.0 - s) * q1.to_f64().1 + s * q2.to_f64().1;
        let e = predicted_probe_exponents(d, beta, beta, beta, 1.0 / x, 1.0 / y, ProbeFamily::SmallBallDelta).unwrap();
        assert!(e.gap.abs() < 1e-12, "s = {s}: {}", e.gap);
    }

    let (b, g) = (0.25, 0.75);
    let e = predicted_probe_exponents(2, b, g, g, 2.5, 6.0, ProbeFamily::LocalAnnulus { window_exponent: None }).unwrap();
    let l = 0.5 + (1.0 - g) / 6.0 + (1.0 - b / g) * ((1.0 + g) / 6.0 - 0.5) - 1.0 / 2.5;
    assert!((e.gap - l).abs() < 1e-12);

    assert!(predicted_probe_exponents(2, 0.8, 0.5, 1.0, 2.0, 2.0, ProbeFamily::BallR).is_err());
    assert!(predicted_probe_exponents(2, 0.5, 0.5, 1.0, 2.0, 2.0, ProbeFamily::SteinLog).unwrap().logarithmic);
}
