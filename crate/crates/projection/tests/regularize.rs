use horolab_projection::*;
use proptest::prelude::*;

const ALPHA: f64 = 0.6;
const EPS: f64 = 0.02;

/// Naive closed max-norm ball count.
fn ball_count(pts: &[Sl2], c: &Sl2, b: f64) -> usize {
    pts.iter().filter(|p| (**p - *c).norm() <= b).count()
}

fn ratio(pts: &[Sl2], c: &Sl2, b: f64, b1: f64, alpha: f64) -> f64 {
    ball_count(pts, c, b) as f64 / pts.len() as f64 / (b / b1).powf(alpha)
}

fn check(name: &str, f: &[Sl2]) -> Regularized {
    let r = dyadic_regularize(f, ALPHA, EPS, &RegularizeConfig::default()).unwrap();
    assert!(r.b1_in_bounds(), "{name}: b1 {} outside {:?}", r.b1, r.b1_bounds);
    let c = &r.certificate;
    assert!(c.upsilon <= r.certificate_bound, "{name}: {} > {}", c.upsilon, r.certificate_bound);
    assert!((r.exponent() - (ALPHA - 20.0 * EPS)).abs() < 1e-15);
    // F' sits in the ball of radius b1 about w0
    assert!(r.points.iter().all(|p| (*p - r.w0).norm() <= r.b1 * (1.0 + 1e-12)));
    assert_eq!(r.points[0], r.w0);
    // the worst ratio is reproduced by a naive count
    let w = Sl2::new(c.worst_center[0], c.worst_center[1], c.worst_center[2]);
    let again = ratio(&r.points, &w, c.worst_b, r.b1, c.alpha);
    assert!((again - c.upsilon).abs() <= 1e-12 * c.upsilon, "{name}: {again} vs {}", c.upsilon);
    let m = PointSetMeasure::new(r.points.clone(), r.w0, c.b0, r.b1, c.alpha).unwrap();
    assert!(PointSetMeasure { certificate: Some(c.clone()), ..m }.verify());
    r
}

#[test]
fn grid_segment_cantor() {
    // First-run certificates were 1.149, 1.149, 1.000 against the bound 10.556.
    for (name, f, fixture) in [
        ("grid", uniform_grid(16), 1.149),
        ("segment", diagonal_segment(4096), 1.149),
        ("cantor", cantor_product(4, 0.25), 1.0),
    ] {
        let r = check(name, &f);
        assert!(r.certificate.upsilon <= 2.0 * fixture, "{name}: {}", r.certificate.upsilon);
    }
}

#[test]
fn point_centers_never_beat_the_certificate() {
    let f = scaled(&cantor_product(3, 0.25), 0.5);
    let r = dyadic_regularize(&f, ALPHA, EPS, &RegularizeConfig::default()).unwrap();
    let c = &r.certificate;
    for b in dyadic_scales(c.b0, c.b1) {
        for p in &r.points {
            assert!(ratio(&r.points, p, b, r.b1, c.alpha) <= c.upsilon * (1.0 + 1e-12));
        }
    }
}

#[test]
fn eight_point_cube_degenerates() {
    // every finest cell holds one corner; the cut lands at the root and F' is a single point
    let f = uniform_grid(2);
    let r = dyadic_regularize(&f, ALPHA, EPS, &RegularizeConfig::default()).unwrap();
    assert_eq!(r.points.len(), 1);
    assert!(r.certificate.upsilon <= r.certificate_bound);
    assert!(!r.b1_in_bounds(), "b1 {} bounds {:?}", r.b1, r.b1_bounds);
}

#[test]
fn energy_cap_is_enforced() {
    let cfg = RegularizeConfig { energy_cap: 1.0 + 1e-9, ..Default::default() };
    let err = dyadic_regularize(&uniform_grid(6), ALPHA, EPS, &cfg).unwrap_err();
    assert!(matches!(err, ProjectionError::HypothesisFail { .. }), "{err:?}");
}

#[test]
fn bad_parameters() {
    assert_eq!(dyadic_regularize(&[], ALPHA, EPS, &Default::default()), Err(ProjectionError::Empty));
    let f = uniform_grid(2);
    assert!(matches!(dyadic_regularize(&f, 3.5, EPS, &Default::default()), Err(ProjectionError::InvalidParameter(_))));
    let cfg = RegularizeConfig { tree_step: 0, ..Default::default() };
    assert!(matches!(dyadic_regularize(&f, ALPHA, EPS, &cfg), Err(ProjectionError::InvalidParameter(_))));
}

#[test]
fn bounds_formula() {
    let (lo, hi) = b1_bounds(4096, ALPHA, EPS);
    assert!((hi - 4096f64.powf(-EPS)).abs() < 1e-15);
    assert!((lo - 4096f64.powf(-(2.4 + 0.1) / (2.4 + 0.4))).abs() < 1e-15);
    assert!((certificate_bound(1, 0.2) - 8.0 * 2f64.powf(0.4)).abs() < 1e-12);
}

fn cloud() -> impl Strategy<Value = Vec<Sl2>> {
    prop::collection::btree_set((0u32..1024, 0u32..1024, 0u32..1024), 2..120).prop_map(|s| {
        s.into_iter().map(|(a, b, c)| Sl2::new(a as f64 / 1024.0, b as f64 / 1024.0, c as f64 / 1024.0)).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn certificate_within_tree_bound(f in cloud(), alpha in 0.5f64..2.5, eps in 0.001f64..0.02) {
        let r = dyadic_regularize(&f, alpha, eps, &RegularizeConfig { energy_cap: f64::INFINITY, ..Default::default() }).unwrap();
        prop_assert!(r.certificate.upsilon <= r.certificate_bound);
        prop_assert!(r.indices.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(r.points.iter().all(|p| (*p - r.w0).norm() <= r.b1 * (1.0 + 1e-12)));
        prop_assert!(r.k0 < r.k2.max(1) && r.k2 <= r.k1);
    }
}
