use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use minmetric::distance::{hilbert_distance, klein_distance, minimal_distance_lower};
use minmetric::gromov::{four_point_defect, four_point_delta, gromov_product, QuadrupleSample};
use minmetric::linalg::{norm, Rigid};
use minmetric::{ConvexBody, Finsler, MetricEvaluator, MetricTag};

fn vec3(r: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-r..r, 3)
}

/// A point strictly inside the unit ball, from a cube sample.
fn in_ball(p: &[f64]) -> Vec<f64> {
    let n = norm(p);
    let s = if n >= 0.99 { 0.99 / n } else { 1.0 };
    p.iter().map(|c| c * s).collect()
}

fn bodies() -> Vec<ConvexBody> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    vec![
        ConvexBody::unit_ball(3),
        ConvexBody::ellipsoid(vec![0.0; 3], vec![1.0, 2.0, 0.5]).unwrap(),
        ConvexBody::cylinder(3, 1.0, 2.0).unwrap(),
        ConvexBody::random_tangent_polytope(3, 12, &mut rng).unwrap(),
    ]
}

fn interior(body: &ConvexBody, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    body.sample_interior(&mut rng).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metrics_are_absolutely_homogeneous(seed in any::<u64>(), v in vec3(2.0), lambda in -5.0f64..5.0, which in 0usize..4) {
        let body = &bodies()[which];
        let x = interior(body, seed);
        for tag in [MetricTag::Hilbert, MetricTag::MinimalLower, MetricTag::MinimalUpper] {
            let f = MetricEvaluator::new(tag, body);
            let scaled: Vec<f64> = v.iter().map(|c| lambda * c).collect();
            let a = f.eval(&x, &scaled).unwrap();
            let b = lambda.abs() * f.eval(&x, &v).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b), "{tag:?}: {a} vs {b}");
        }
    }

    #[test]
    fn metrics_commute_with_rigid_motions(seed in any::<u64>(), v in vec3(1.0), shift in vec3(3.0), which in 0usize..4) {
        let body = &bodies()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let motion = Rigid::random(&mut rng, shift);
        let moved = body.transformed(&motion).unwrap();
        let x = interior(body, seed ^ 1);
        let (mx, mv) = (motion.apply(&x).to_vec(), motion.rotate(&v).to_vec());
        for tag in [MetricTag::Hilbert, MetricTag::MinimalUpper] {
            let a = MetricEvaluator::new(tag, body).eval(&x, &v).unwrap();
            let b = MetricEvaluator::new(tag, &moved).eval(&mx, &mv).unwrap();
            prop_assert!((a - b).abs() <= 1e-7 * (1.0 + a), "{tag:?}: {a} vs {b}");
        }
        let da = hilbert_distance(body, &x, &interior(body, seed ^ 2)).unwrap();
        let y = interior(body, seed ^ 2);
        let db = hilbert_distance(&moved, &mx, &motion.apply(&y)).unwrap();
        prop_assert!((da - db).abs() <= 1e-8 * (1.0 + da));
    }

    #[test]
    fn ball_sandwich(p in vec3(1.0), v in vec3(1.0)) {
        let ball = ConvexBody::unit_ball(3);
        let x = in_ball(&p);
        let ev = |tag| MetricEvaluator::new(tag, &ball).eval(&x, &v).unwrap();
        let (lo, ex, up) = (ev(MetricTag::MinimalLower), ev(MetricTag::ExactMinimal), ev(MetricTag::MinimalUpper));
        prop_assert!(lo <= ex + 1e-9 && ex <= up + 1e-9, "{lo} {ex} {up}");
    }

    #[test]
    fn hilbert_distance_is_a_pseudometric(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>(), which in 0usize..4) {
        let body = &bodies()[which];
        let (x, y, z) = (interior(body, s1), interior(body, s2), interior(body, s3));
        let d = |a: &[f64], b: &[f64]| hilbert_distance(body, a, b).unwrap();
        prop_assert!((d(&x, &y) - d(&y, &x)).abs() <= 1e-9 * (1.0 + d(&x, &y)));
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-9);
        prop_assert_eq!(d(&x, &x), 0.0);
    }

    #[test]
    fn lower_bound_sits_between_half_and_full_hilbert(s1 in any::<u64>(), s2 in any::<u64>(), which in 0usize..4) {
        let body = &bodies()[which];
        let (x, y) = (interior(body, s1), interior(body, s2));
        let h = hilbert_distance(body, &x, &y).unwrap();
        let l = minimal_distance_lower(body, &x, &y).unwrap();
        prop_assert!(0.5 * h <= l + 1e-12 && l <= h + 1e-12, "{h} {l}");
    }

    #[test]
    fn klein_matches_cross_ratio(p in vec3(1.0), q in vec3(1.0)) {
        let ball = ConvexBody::unit_ball(3);
        let (x, y) = (in_ball(&p), in_ball(&q));
        let a = klein_distance(&x, &y).unwrap();
        let b = hilbert_distance(&ball, &x, &y).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a), "{a} {b}");
    }

    #[test]
    fn four_point_defect_ignores_labels_and_scales(d in prop::collection::vec(0.1f64..10.0, 6), lambda in 0.01f64..100.0) {
        let d: [f64; 6] = d.try_into().unwrap();
        let base = four_point_defect(&d);
        // Pair order (01, 02, 03, 12, 13, 23); relabel 0 <-> 2 and 1 <-> 3.
        let swapped = [d[5], d[1], d[3], d[2], d[4], d[0]];
        prop_assert!((four_point_defect(&swapped) - base).abs() <= 1e-12 * base.max(1.0));
        // Relabel 0 -> 1 -> 2 -> 0.
        let rotated = [d[3], d[0], d[4], d[1], d[5], d[2]];
        prop_assert!((four_point_defect(&rotated) - base).abs() <= 1e-12 * base.max(1.0));
        let scaled = d.map(|x| lambda * x);
        prop_assert!((four_point_defect(&scaled) - lambda * base).abs() <= 1e-12 * lambda * base.max(1.0));
    }

    #[test]
    fn delta_is_monotone_in_the_sample_set(ds in prop::collection::vec(prop::collection::vec(0.1f64..10.0, 6), 2..20)) {
        let pts = || [vec![0.0], vec![0.0], vec![0.0], vec![0.0]];
        let samples: Vec<QuadrupleSample> = ds
            .iter()
            .map(|d| QuadrupleSample::from_distances(pts(), d.clone().try_into().unwrap()))
            .collect();
        let all = four_point_delta(&samples, "test").unwrap();
        let part = four_point_delta(&samples[..samples.len() / 2 + 1], "test").unwrap();
        prop_assert!(part.delta_estimate <= all.delta_estimate);
        prop_assert_eq!(all.delta_estimate, samples[all.worst_index].defect());
    }

    #[test]
    fn gromov_product_of_line_points(a in -10.0f64..10.0, b in -10.0f64..10.0, o in -10.0f64..10.0) {
        let g = gromov_product((a - o).abs(), (b - o).abs(), (a - b).abs()).unwrap();
        let expected = if (a - o) * (b - o) > 0.0 { (a - o).abs().min((b - o).abs()) } else { 0.0 };
        prop_assert!((g - expected).abs() <= 1e-9);
    }
}
