use horolab_equidist::*;
use horolab_lattice::{distance_value, enumerate_lattice, reduce_point, Lattice, LatticeCache, LatticeKind, QuotientPoint};
use horolab_lie::{exp_lie, LieVector};
use std::sync::OnceLock;

const KIND: LatticeKind = LatticeKind::GaussianIntegers;

fn cache() -> &'static LatticeCache {
    static C: OnceLock<LatticeCache> = OnceLock::new();
    C.get_or_init(|| enumerate_lattice(&Lattice::new(KIND), 6).unwrap())
}

fn point(w: [f64; 6]) -> QuotientPoint {
    reduce_point(&exp_lie(KIND.group(), &LieVector::from_array(&w)), KIND)
}

#[test]
fn profile_shape() {
    assert_eq!(bump_profile(0.0), 1.0);
    assert_eq!(bump_profile(1.0), 0.0);
    assert_eq!(bump_profile(-1.5), 0.0);
    let mut prev = 1.0;
    for k in 1..100 {
        let v = bump_profile(k as f64 / 100.0);
        assert!(v < prev && v > 0.0);
        assert_eq!(v, bump_profile(-(k as f64) / 100.0));
        prev = v;
    }
}

#[test]
fn peak_bump_is_one_at_center() {
    let z = point([0.1, 0.2, -0.1, 0.05, 0.0, 0.3]);
    let f = TestFunction::bump(&z, 20.0, Normalization::Peak, cache()).unwrap();
    assert_eq!(f.sup(), 1.0);
    assert_eq!(f.support_radius(), 2.0);
    assert!((f.eval(&z) - 1.0).abs() < 1e-9);
}

#[test]
fn eval_matches_distance_oracle() {
    let z = point([0.1, 0.2, -0.1, 0.05, 0.0, 0.3]);
    let f = TestFunction::bump(&z, 20.0, Normalization::Peak, cache()).unwrap();
    let mut hits = 0;
    for k in 0..40 {
        let s = k as f64 * 0.07;
        let x = point([0.3 * s.sin(), s, -0.2 * s, 0.4 * s.cos(), 0.1, -0.5 * s]);
        let d = distance_value(&x, &z, cache());
        let want = bump_profile(d / f.support_radius());
        assert!((f.eval(&x) - want).abs() < 1e-12, "k = {k}");
        hits += usize::from(want > 0.0);
    }
    assert!(hits > 5 && hits < 40, "{hits}");
}

#[test]
fn constant_and_scaling() {
    let c = TestFunction::constant(0.7);
    assert!(c.is_constant());
    assert_eq!(c.eval(&point([0.0; 6])), 0.7);
    let z = point([0.0; 6]);
    let f = TestFunction::bump(&z, 20.0, Normalization::Peak, cache()).unwrap().scaled(3.0);
    assert_eq!(f.sup(), 3.0);
    assert!(TestFunction::bump(&z, 0.0, Normalization::Peak, cache()).is_err());
}

#[test]
fn chart_mass_scales_with_dimension() {
    let g = KIND.group();
    let m1 = chart_mass(g, 0.02).unwrap();
    let m2 = chart_mass(g, 0.04).unwrap();
    let ratio = m2 / m1;
    assert!((ratio / 64.0 - 1.0).abs() < 0.1, "{ratio}");
    let z = point([0.0; 6]);
    let f = TestFunction::bump(&z, 0.2, Normalization::ChartMass, cache()).unwrap();
    assert!((f.scale * m1 - 1.0).abs() < 1e-12);
    assert!(matches!(chart_mass(g, 5.0), Err(EquidistError::ChartTooSmall { .. })));
}
