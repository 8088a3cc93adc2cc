use minmetric::distance::{hilbert_distance, minimal_distance_lower, Polyline};
use minmetric::gromov::{build_quasi_geodesic, triangle_slimness, SlimnessGrid};
use minmetric::{ConvexBody, Error};

#[test]
fn klein_geodesic_triangle_is_thin() {
    let ball = ConvexBody::unit_ball(3);
    let v = [[0.9, 0.0, 0.0], [0.0, 0.9, 0.0], [0.0, 0.0, 0.9]];
    let sides = [
        Polyline::segment(&v[0], &v[1]),
        Polyline::segment(&v[1], &v[2]),
        Polyline::segment(&v[2], &v[0]),
    ];
    let m = triangle_slimness(
        [&sides[0], &sides[1], &sides[2]],
        |x, y| hilbert_distance(&ball, x, y).unwrap(),
        SlimnessGrid::default(),
    )
    .unwrap();
    assert!(m > 0.0 && m <= 2.0, "{m}");
}

#[test]
fn open_triangles_are_rejected() {
    let a = Polyline::segment(&[0.0, 0.0, 0.0], &[0.1, 0.0, 0.0]);
    let b = Polyline::segment(&[0.2, 0.0, 0.0], &[0.0, 0.1, 0.0]);
    let c = Polyline::segment(&[0.0, 0.1, 0.0], &[0.0, 0.0, 0.0]);
    let e = triangle_slimness([&a, &b, &c], |_, _| 0.0, SlimnessGrid::default()).unwrap_err();
    assert!(matches!(e, Error::EndpointMismatch { .. }));
}

#[test]
fn flat_face_triangles_fatten_with_the_horizon() {
    let body = ConvexBody::cylinder(3, 1.0, 1.0).unwrap();
    let p = [0.0, 0.0, 0.5];
    let d = |x: &[f64], y: &[f64]| minimal_distance_lower(&body, x, y).unwrap();
    let mut last = 0.0;
    for t in [2.0, 3.0, 4.0] {
        let g = build_quasi_geodesic(&body, &p, &[0.0, 0.0, 0.0], 1.0, t, 129).unwrap();
        let s = build_quasi_geodesic(&body, &p, &[1.0, 0.0, 0.0], 1.0, t, 129).unwrap();
        let s = s.polyline.reversed();
        let bridge = Polyline::segment(g.polyline.last(), s.first());
        let m = triangle_slimness([&g.polyline, &bridge, &s], d, SlimnessGrid::default()).unwrap();
        assert!(m > last, "{t}: {m} <= {last}");
        last = m;
    }
}

#[test]
fn sigma_starts_at_p_and_needs_a_boundary_target() {
    let ball = ConvexBody::unit_ball(3);
    let q = build_quasi_geodesic(&ball, &[0.1, 0.2, 0.0], &[0.0, 1.0, 0.0], 1.0, 2.0, 5).unwrap();
    assert_eq!(q.point(0.0), vec![0.1, 0.2, 0.0]);
    assert!(matches!(
        build_quasi_geodesic(&ball, &[0.0; 3], &[0.0, 0.5, 0.0], 1.0, 2.0, 5),
        Err(Error::NotOnBoundary { .. })
    ));
}
