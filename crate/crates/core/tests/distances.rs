use minmetric::distance::{
    boundary_intrinsic_distance, curve_length, filling_distance, geodesic_graph_distance, klein_distance,
    BoundaryMesh, GraphConfig, Polyline,
};
use minmetric::{ConvexBody, MetricEvaluator, MetricTag};

#[test]
fn halfspace_graph_brackets_the_log_ratio() {
    let body = ConvexBody::upper_halfspace(3);
    let metric = MetricEvaluator::new(MetricTag::ExactMinimal, &body);
    let (x, y) = ([0.2, 0.0, 0.0], [1.0, 0.5, -0.3]);
    let config = GraphConfig {
        budget: 3000,
        seed: 2,
        ..GraphConfig::default()
    };
    let r = geodesic_graph_distance(&metric, &x, &y, &config).unwrap();
    let exact = 0.5 * (1.0f64 / 0.2).ln();
    assert!(r.lower <= exact + 1e-12 && exact <= r.upper + 1e-9, "{r:?}");
    assert!(r.upper <= 1.05 * exact, "{r:?}");
    assert!(r.witness.is_some());
}

#[test]
fn ball_radius_has_the_closed_form_length() {
    let ball = ConvexBody::unit_ball(3);
    let metric = MetricEvaluator::new(MetricTag::ExactMinimal, &ball);
    let curve = Polyline::from_points(vec![vec![0.0; 3], vec![0.3, 0.0, 0.0], vec![0.6, 0.0, 0.0]]).unwrap();
    let len = curve_length(&metric, &ball, &curve).unwrap();
    let exact = klein_distance(&[0.0; 3], &[0.6, 0.0, 0.0]).unwrap();
    assert!((len - exact).abs() < 1e-6 * exact, "{len} {exact}");
}

#[test]
fn filling_distance_grows_towards_the_boundary() {
    let ball = ConvexBody::unit_ball(3);
    let mesh = BoundaryMesh::icosphere(&ball, 3).unwrap();
    let h = boundary_intrinsic_distance(&mesh, &[0.0, 0.0, 1.0], &[0.0, 0.0, -1.0]);
    assert!((h / std::f64::consts::PI - 1.0).abs() < 0.02);
    let mut last = 0.0;
    for r in [0.9, 0.99, 0.999] {
        let d = filling_distance(&ball, &mesh, &[r, 0.0, 0.0], &[0.0, r, 0.0]).unwrap();
        assert!(d > last);
        last = d;
    }
}
