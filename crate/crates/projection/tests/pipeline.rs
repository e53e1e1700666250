use horolab_lattice::{enumerate_lattice, reduce_point, Lattice, LatticeKind};
use horolab_lie::{exp_lie, LieVector};
use horolab_projection::*;

/// First-run `max d_X(v_s x2, a_t u_{r+r0} exp(w') x1) / b1` for the setup below.
const MEMBERSHIP_FIXTURE: f64 = 2.7648;

#[test]
fn cantor_cloud_on_gaussian_lattice() {
    let kind = LatticeKind::GaussianIntegers;
    let cache = enumerate_lattice(&Lattice::new(kind), 6).unwrap();
    let g = exp_lie(kind.group(), &LieVector::from_array(&[0.13, -0.21, 0.17, 0.11, 0.07, -0.19]));
    let x1 = reduce_point(&g, kind);
    let f = scaled(&cantor_product(4, 0.25), 1.0 / 16.0);
    let cfg = PipelineConfig::new(0.6, 0.02);
    let out = project_pipeline(&f, &x1, &cfg, &cache).unwrap();

    assert!(out.regularized.b1_in_bounds());
    assert_eq!(out.b1, 1.0 / 64.0);
    assert!((out.t - 64f64.ln()).abs() < 1e-12);
    assert!(out.r.abs() <= DIRECTION_WINDOW);
    assert!(out.report.pass);
    assert_eq!(out.support.len(), out.sources.len());
    assert!((out.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(out.support.len() as f64 >= GOOD_FRACTION * out.e_points.len() as f64);
    assert!(out.support.iter().all(|s| s.abs() <= 2.0));
    assert!(out.regularity.constant.is_finite());

    let m = membership_check(&out, &f, &x1, &cache);
    assert_eq!(m.checked, out.support.len());
    assert!(m.fitted_c <= 2.0 * MEMBERSHIP_FIXTURE, "{}", m.fitted_c);
    eprintln!("membership constant {:.4}, rho regularity {:.4}", m.fitted_c, out.regularity.constant);
}

#[test]
fn single_point_rejected() {
    let kind = LatticeKind::GaussianIntegers;
    let cache = enumerate_lattice(&Lattice::new(kind), 2).unwrap();
    let x1 = reduce_point(&exp_lie(kind.group(), &LieVector::ZERO), kind);
    let err = project_pipeline(&[Sl2::ZERO], &x1, &PipelineConfig::new(0.6, 0.02), &cache).unwrap_err();
    assert!(matches!(err, ProjectionError::SizeFloor { n: 1, .. }), "{err:?}");
}

#[test]
fn floor_formula() {
    let v = measure_floor(4096, 0.6, 0.02);
    assert!((v - 4096f64.powf(-0.3 / 2.8)).abs() < 1e-15);
}
