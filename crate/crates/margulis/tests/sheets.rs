use horolab_lattice::*;
use horolab_lie::*;
use horolab_margulis::*;
use horolab_mc::{rng_for, Rng};
use proptest::prelude::*;
use std::sync::OnceLock;

fn cache() -> &'static LatticeCache {
    static C: OnceLock<LatticeCache> = OnceLock::new();
    C.get_or_init(|| enumerate_lattice(&Lattice::new(LatticeKind::GaussianIntegers), 6).unwrap())
}

fn e_point() -> QuotientPoint {
    let kind = LatticeKind::GaussianIntegers;
    reduce_point(&GroupElement::identity(kind.group()), kind)
}

const ETA: f64 = 0.005;

#[test]
fn single_sheet_falls_back() {
    let set = SheetSet::new(e_point(), vec![Sl2::ZERO], 1e-7, ETA).unwrap();
    let z = SheetPoint::center(0);
    let d = set.displacements(&M2r::identity(), &z, cache());
    assert!(d.vectors.is_empty());
    let inj = inj_value(&e_point(), cache());
    assert_eq!(set.margulis_f(0.5, &M2r::identity(), &z, cache()), inj.powf(-0.5));
    assert_eq!(set.psi(0.5, &M2r::identity(), &z, cache()), inj.powf(-0.5));
}

#[test]
fn two_sheets_one_displacement() {
    let w0 = Sl2::new(3e-6, -8e-6, 5e-6);
    let set = SheetSet::new(e_point(), vec![Sl2::ZERO, w0], 1e-5, ETA).unwrap();
    let d = set.displacements(&M2r::identity(), &SheetPoint::center(0), cache());
    assert_eq!(d.vectors.len(), 1);
    let n = d.vectors[0].norm();
    assert!(0.5 * w0.norm() <= n && n <= 2.0 * w0.norm(), "{n}");
    let f = set.margulis_f(0.5, &M2r::identity(), &SheetPoint::center(0), cache());
    assert!(f >= 0.5f64.powf(0.5) * w0.norm().powf(-0.5) && f <= 2f64.powf(0.5) * w0.norm().powf(-0.5));
}

#[test]
fn invalid_sets_rejected() {
    let bad = |f: Vec<Sl2>, beta: f64| SheetSet::new(e_point(), f, beta, ETA).is_err();
    assert!(bad(vec![Sl2::new(1e-6, 0.0, 0.0)], 1e-5));
    assert!(bad(vec![Sl2::ZERO, Sl2::new(2e-5, 0.0, 0.0)], 1e-5));
    assert!(bad(vec![Sl2::ZERO], 1e-4));
    assert!(SheetSet::new(e_point(), vec![Sl2::ZERO], 1e-6, ETA).unwrap().base_in_thick(cache()));
}

#[test]
fn sum_over_sheets_bounded_by_twice_f() {
    let mut rng = rng_for(21, 0, 0);
    for beta in [1e-7, 1e-6, 2.5e-5] {
        let set = SheetSet::new(e_point(), random_f(24, beta, &mut rng), beta, ETA).unwrap();
        for i in 0..set.len() {
            let w0 = set.f[i];
            let lhs: f64 = set.f.iter().filter(|w| **w != w0).map(|w| (*w - w0).norm().powf(-0.5)).sum();
            let f = set.margulis_f(0.5, &M2r::identity(), &SheetPoint::center(i), cache());
            assert!(lhs <= 2.0 * f, "beta {beta} sheet {i}: {lhs} > 2 * {f}");
        }
    }
}

#[test]
fn displacement_bounds_per_pair() {
    let mut rng = rng_for(22, 0, 0);
    let set = SheetSet::new(e_point(), random_f(12, 1e-6, &mut rng), 1e-6, ETA).unwrap();
    for a in 0..set.len() {
        for b in 0..set.len() {
            if a == b {
                continue;
            }
            let v = set.offset(b, a).norm();
            let d = (set.f[b] - set.f[a]).norm();
            assert!(0.5 * d <= v && v <= 2.0 * d);
        }
    }
}

#[test]
fn psi_dominates_fallback_and_lemma_bounds() {
    let mut rng = rng_for(23, 0, 0);
    for beta in [1e-7, 2.5e-5] {
        let set = SheetSet::new(e_point(), random_f(16, beta, &mut rng), beta, ETA).unwrap();
        let nf = set.len() as f64;
        for m in [1.0, 4.0, 8.0] {
            for _ in 0..50 {
                let h = a_mat(m) * u_mat(rng.gen());
                let z = set.sample_point(&mut rng);
                let d = set.displacements(&h, &z, cache());
                assert!(d.psi(0.5) >= d.inj.powf(-0.5));
                let count_bound = C14_COUNT_FIXTURE * beta.powi(-6) * (4.0 * m).exp() * nf;
                let psi_bound = C14_PSI_FIXTURE * beta.powi(-7) * (5.0 * m).exp() * nf;
                assert!((d.vectors.len() as f64) <= count_bound);
                assert!(d.psi(0.5) <= psi_bound);
            }
        }
    }
}

#[test]
fn f_homogeneous_in_displacements() {
    let d = Displacements { vectors: vec![Sl2::new(1e-4, 0.0, 0.0), Sl2::new(0.0, -3e-4, 2e-4)], inj: 0.01 };
    for lam in [0.1, 2.0, 17.0] {
        let s = Displacements { vectors: d.vectors.iter().map(|v| *v * lam).collect(), inj: d.inj };
        let want = lam.powf(-0.7) * d.f(0.7);
        assert!((s.f(0.7) - want).abs() <= 1e-12 * want);
    }
}

#[test]
fn displacements_follow_the_push() {
    // A displacement at e reappears as Ad(h) of itself when the push keeps it short.
    let w0 = Sl2::new(0.0, 0.0, 4e-7);
    let set = SheetSet::new(e_point(), vec![Sl2::ZERO, w0], 1e-6, ETA).unwrap();
    let z = SheetPoint::center(0);
    let v = set.displacements(&M2r::identity(), &z, cache()).vectors[0];
    let h = a_mat(3.0) * u_mat(0.25);
    let pushed = set.displacements(&h, &z, cache()).vectors;
    assert_eq!(pushed.len(), 1);
    assert!((pushed[0] - ad_h(&h, &v)).norm() <= 1e-12);
}

#[test]
fn walk_degenerate_depth() {
    let mut rng = rng_for(24, 0, 0);
    let set = SheetSet::new(e_point(), random_f(16, 1e-7, &mut rng), 1e-7, ETA).unwrap();
    let walk = RandomWalk::new(0.5, 8.0, 0).unwrap();
    let r = verify_margulis_inequality(&set, &walk, &SheetPoint::center(0), 10, 1, cache(), C13_FIXTURE);
    assert!(r.pass);
    assert_eq!(r.lhs.mean, r.f_e);
    assert_eq!(r.rhs, r.f_e);
}

#[test]
fn one_sheet_inequality_is_inj_contraction() {
    let set = SheetSet::new(e_point(), vec![Sl2::ZERO], 1e-7, ETA).unwrap();
    let walk = RandomWalk::new(0.5, 8.0, 2).unwrap();
    let reps = verify_depths(&set, &walk, &SheetPoint::center(0), 4000, 3, cache(), C13_FIXTURE);
    let inj = inj_value(&e_point(), cache());
    for r in &reps {
        assert_eq!(r.f_e, inj.powf(-0.5));
        assert_eq!(r.fallback_fraction, 1.0);
        assert!(r.pass, "{r:?}");
    }
    // With no displacements psi = f, so depth-l slots coincide.
    assert_eq!(reps[2].lhs.mean, reps[2].psi[1].mean);
}

#[test]
fn sixteen_sheet_inequality() {
    let mut rng = rng_for(3, 0, 0);
    let set = SheetSet::new(e_point(), random_f(16, 1e-7, &mut rng), 1e-7, ETA).unwrap();
    let walk = RandomWalk::new(0.5, 8.0, 3).unwrap();
    let reps = verify_depths(&set, &walk, &SheetPoint::center(0), 5000, 1, cache(), C13_FIXTURE);
    for r in &reps[1..] {
        assert!(r.pass, "{r:?}");
        assert!(r.c13_needed <= C13_FIXTURE);
        assert!(r.lhs.mean <= r.rhs);
    }
}

#[test]
fn inequality_reproducible() {
    let mut rng = rng_for(3, 0, 0);
    let set = SheetSet::new(e_point(), random_f(8, 1e-7, &mut rng), 1e-7, ETA).unwrap();
    let walk = RandomWalk::new(0.5, 8.0, 2).unwrap();
    let a = verify_depths(&set, &walk, &SheetPoint::center(1), 600, 5, cache(), C13_FIXTURE);
    let b = horolab_mc::with_threads(3, || {
        verify_depths(&set, &walk, &SheetPoint::center(1), 600, 5, cache(), C13_FIXTURE)
    });
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn inj_walk_offset_stable() {
    let kind = LatticeKind::GaussianIntegers;
    let m = 8.0;
    for g in [GroupElement::identity(kind.group()), a_elem(kind.group(), 2.0)] {
        let x = reduce_point(&g, kind);
        let i0 = inj_value(&x, cache()).powf(-0.5);
        let b: Vec<f64> = (1..=5)
            .map(|n| inj_walk_average(&x, 0.5, m, n, cache(), 2000, 1).mean - (-(n as f64)).exp() * i0)
            .collect();
        let (lo, hi) = b.iter().fold((f64::MAX, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
        assert!(lo > 0.0 && hi <= 2.0 * lo, "{b:?}");
    }
}

#[test]
fn haar_sampler_lands_in_standard_domain() {
    let kind = LatticeKind::GaussianIntegers;
    let mut rng = rng_for(8, 0, 0);
    for _ in 0..500 {
        let g = haar_periodic_point(kind, &mut rng);
        assert!(g.h_part(1e-12).is_some());
        let SymPoint::H3(p) = sym_point(&g) else { panic!() };
        assert!(p.z.im.abs() <= 1e-12);
        assert!(p.z.re.abs() <= 0.5 + 1e-12);
        assert!(p.z.re * p.z.re + p.h * p.h >= 1.0 - 1e-9);
    }
}

#[test]
fn periodic_single_point_without_hits() {
    let kind = LatticeKind::GaussianIntegers;
    let y = reduce_point(&a_elem(kind.group(), 0.3), kind);
    let st = periodic_orbit_f(std::slice::from_ref(&y), 0.5, DEFAULT_DELTA0, cache());
    assert_eq!(st.max_count, 0);
    assert_eq!(st.mean_f, inj_value(&y, cache()).powf(-0.5));
}

#[test]
fn periodic_mean_stable_across_seeds() {
    let kind = LatticeKind::GaussianIntegers;
    let a = periodic_orbit_f(&periodic_sample(kind, 1000, 1), 0.5, DEFAULT_DELTA0, cache());
    let b = periodic_orbit_f(&periodic_sample(kind, 1000, 2), 0.5, DEFAULT_DELTA0, cache());
    assert!(a.mean_f.is_finite() && b.mean_f.is_finite());
    assert!((a.mean_f - b.mean_f).abs() <= 0.2 * a.mean_f, "{} vs {}", a.mean_f, b.mean_f);
}

#[test]
fn periodic_counts_grow_then_settle_with_depth() {
    let kind = LatticeKind::GaussianIntegers;
    let sample = periodic_sample(kind, 200, 3);
    let counts: Vec<f64> = (1..=6)
        .map(|d| {
            let c = enumerate_lattice(&Lattice::new(kind), d).unwrap();
            periodic_orbit_f(&sample, 0.5, 100.0, &c).mean_count
        })
        .collect();
    assert!(counts.windows(2).all(|w| w[1] >= w[0]), "{counts:?}");
    assert_eq!(counts[4], counts[5], "{counts:?}");
    assert!(counts[5] > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn walk_support_closed_form(seed in 0u64..1000, ell in 1usize..5, m in 0.5f64..9.0) {
        let walk = RandomWalk::new(0.5, m, ell).unwrap();
        let mut rng = rng_for(seed, 0, 0);
        let d = walk.draw(&mut rng);
        let p = walk.product(&d.r);
        let e = walk.element(ell, d.r_hat[ell - 1]);
        let scale = p.amax();
        prop_assert!((p - e).amax() <= 1e-12 * scale);
        let direct: f64 = d.r.iter().enumerate().map(|(j, r)| (-(j as f64) * m).exp() * r).sum();
        prop_assert!((direct - d.r_hat[ell - 1]).abs() <= 1e-15);
        prop_assert!(d.r.iter().all(|r| (0.0..=1.0).contains(r)));
    }
}
