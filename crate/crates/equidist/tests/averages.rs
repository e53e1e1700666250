use horolab_equidist::*;
use horolab_lattice::{enumerate_lattice, reduce_point, Lattice, LatticeCache, LatticeKind, QuotientPoint};
use horolab_lie::{exp_lie, GroupElement, LieVector};
use horolab_mc::{with_threads, Estimate};
use std::sync::OnceLock;

const KIND: LatticeKind = LatticeKind::GaussianIntegers;

fn cache() -> &'static LatticeCache {
    static C: OnceLock<LatticeCache> = OnceLock::new();
    C.get_or_init(|| enumerate_lattice(&Lattice::new(KIND), 6).unwrap())
}

fn x1() -> QuotientPoint {
    reduce_point(&exp_lie(KIND.group(), &LieVector::from_array(&[0.13, -0.21, 0.17, 0.11, 0.07, -0.19])), KIND)
}

fn bump() -> TestFunction {
    let z = test_grid(KIND, 1, 0.005, 5, cache())[0];
    TestFunction::bump(&z, 20.0, Normalization::Peak, cache()).unwrap()
}

fn close(a: Estimate, b: Estimate, sigmas: f64) -> bool {
    (a.mean - b.mean).abs() <= sigmas * a.stderr.hypot(b.stderr)
}

#[test]
fn constant_is_exact() {
    let c = TestFunction::constant(0.7);
    let h = horospherical_average(&c, &x1(), 3.0, 100, 1);
    assert_eq!((h.mean, h.stderr), (0.7, 0.0));
    let rho = SparseMeasure::uniform(vec![0.0, 0.5], 0.05, 0.1).unwrap();
    assert_eq!(sparse_average(&c, &x1(), 1.0, &rho, 10, 1).estimate().mean, 0.7);
    let rows = discrepancy_sweep(&[c], &x1(), &rho, &[1.0, 1.4], 10, &[Estimate { mean: 0.7, stderr: 0.0, n: 1 }], 0);
    assert!(rows.iter().all(|r| r.discrepancy == 0.0));
}

#[test]
fn linear_and_bounded() {
    let f = bump();
    let a = horospherical_average(&f, &x1(), 2.0, 2000, 7);
    let b = horospherical_average(&f.scaled(3.0), &x1(), 2.0, 2000, 7);
    assert!((b.mean - 3.0 * a.mean).abs() <= 1e-12 * b.mean.abs());
    assert!(a.mean >= 0.0 && a.mean <= f.sup());
    let fam = horospherical_family(&[f.clone(), TestFunction::constant(1.0)], &x1(), 2.0, 2000, 7);
    assert_eq!(fam[0], a);
    assert_eq!(fam[1].mean, 1.0);
}

#[test]
fn deterministic_and_thread_independent() {
    let f = bump();
    let a = horospherical_average(&f, &x1(), 2.0, 1000, 3);
    assert_eq!(a, horospherical_average(&f, &x1(), 2.0, 1000, 3));
    assert_eq!(a, with_threads(1, || horospherical_average(&f, &x1(), 2.0, 1000, 3)));
    assert_ne!(a, horospherical_average(&f, &x1(), 2.0, 1000, 4));
}

#[test]
fn stderr_shrinks_like_inverse_sqrt() {
    let f = bump();
    let a = horospherical_average(&f, &x1(), 2.0, 1000, 5);
    let b = horospherical_average(&f, &x1(), 2.0, 4000, 5);
    let ratio = a.stderr / b.stderr;
    assert!((1.7..2.3).contains(&ratio), "{ratio}");
}

#[test]
fn converges_to_oracle_and_forgets_base_point() {
    let f = bump();
    let haar = haar_oracle(&f, &x1(), 4000, 9);
    for t in [4.0, 6.0, 8.0] {
        let h = horospherical_average(&f, &x1(), t, 4000, 10 + t as u64);
        assert!(close(h, haar, 4.0), "t = {t}: {h:?} vs {haar:?}");
    }
    let e = reduce_point(&GroupElement::identity(KIND.group()), KIND);
    let other = haar_oracle(&f, &e, 4000, 11);
    assert!(close(other, haar, 4.0), "{other:?} vs {haar:?}");
}

#[test]
fn uniform_grid_matches_full_average() {
    let f = bump();
    let grid: Vec<f64> = (0..128).map(|k| (k as f64 + 0.5) / 128.0).collect();
    let rho = SparseMeasure::uniform(grid, MAX_SCALE, 0.1).unwrap();
    let sparse = sparse_average(&f, &x1(), 1.0, &rho, 64, 2).estimate();
    let full = horospherical_average(&f, &x1(), 1.0, 8000, 2);
    assert!(close(sparse, full, 4.0), "{sparse:?} vs {full:?}");
}

#[test]
fn window_warning() {
    let rho = SparseMeasure::dirac(0.0, 2f64.powi(-8), 0.1).unwrap();
    let (lo, hi) = rho.window();
    let f = TestFunction::constant(1.0);
    assert!(sparse_average(&f, &x1(), 0.5 * (lo + hi), &rho, 4, 0).warning.is_none());
    assert!(sparse_average(&f, &x1(), hi + 0.1, &rho, 4, 0).warning.is_some());
    let grid = window_grid(&rho, 5);
    assert_eq!((grid[0], grid[4]), (lo, hi));
}

fn row(t: f64, d: f64, e: f64) -> SweepRow {
    SweepRow { t, b: 0.01, discrepancy: d, mc_error: e }
}

#[test]
fn decay_verdicts() {
    let falling = [row(1.0, 0.10, 0.01), row(2.0, 0.06, 0.01), row(3.0, 0.02, 0.01)];
    let v = decay_verdict(&falling);
    assert!(v.decays && v.slope < 0.0);
    assert_eq!((v.first, v.last), (0.10, 0.02));
    // within noise
    assert!(!decay_verdict(&[row(1.0, 0.05, 0.02), row(2.0, 0.04, 0.02), row(3.0, 0.03, 0.02)]).decays);
    assert!(!decay_verdict(&[row(1.0, 0.02, 0.001), row(2.0, 0.05, 0.001), row(3.0, 0.08, 0.001)]).decays);
}
