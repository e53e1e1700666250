use horolab_lie::{LieVector, Sl2};
use horolab_margulis::*;
use horolab_mc::rng_for;
use nalgebra::Matrix2;

/// `||Ad(a_m u_r) w||` by explicit 2x2 conjugation of both parts.
fn norm_oracle(w: &LieVector, m: f64, r: f64) -> f64 {
    let g = Matrix2::new((0.5 * m).exp(), 0.0, 0.0, (-0.5 * m).exp()) * Matrix2::new(1.0, r, 0.0, 1.0);
    let gi = g.try_inverse().unwrap();
    [w.h, w.r]
        .iter()
        .map(|p| {
            let x = g * p.to_matrix() * gi;
            x[(0, 0)].abs().max(x[(0, 1)].abs()).max(x[(1, 0)].abs())
        })
        .fold(0.0, f64::max)
}

/// Composite Simpson with `n` (even) panels.
fn simpson(w: &LieVector, alpha: f64, m: f64, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let f = |r: f64| norm_oracle(w, m, r).powf(-alpha);
    let mut s = f(0.0) + f(1.0);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn e12_direction_closed_form() {
    let w = LieVector::from_r(Sl2::E12 * 0.3);
    for (alpha, m) in [(0.5, 3.0), (0.75, 7.0), (0.9, 20.0)] {
        let rep = contraction_check(&w, alpha, m).unwrap();
        let exact = (-alpha * m).exp() * 0.3f64.powf(-alpha);
        assert!((rep.lhs - exact).abs() <= 1e-12 * exact, "{} vs {exact}", rep.lhs);
        assert!(rep.pass);
    }
    // Any m >= ceil(1/alpha) already contracts this direction.
    let unit = LieVector::from_r(Sl2::E12);
    assert!(contracts(contraction_ratio(&unit, 0.5, 2.0).unwrap()));
}

#[test]
fn e21_direction_matches_simpson() {
    let w = LieVector::from_r(Sl2::E21);
    let q = contraction_integral(&w, 0.5, 3.0).unwrap();
    let s = simpson(&w, 0.5, 3.0, 1_000_000);
    assert!((q.value - s).abs() <= 1e-6 * s, "{} vs {s}", q.value);
}

#[test]
fn homogeneity() {
    let mut rng = rng_for(9, 0, 0);
    for _ in 0..50 {
        let w = random_unit(&mut rng);
        for lam in [1e-4, 0.3, 7.0] {
            let a = contraction_integral(&w, 0.75, 5.0).unwrap().value;
            let b = contraction_integral(&(w * lam), 0.75, 5.0).unwrap().value;
            let want = lam.powf(-0.75) * a;
            assert!((b - want).abs() <= 1e-9 * want, "lambda {lam}: {b} vs {want}");
        }
    }
}

#[test]
fn quadrature_agrees_with_simpson_on_nilpotent_family() {
    for r0 in [0.0, 0.37, 0.5, 1.0] {
        let w = nilpotent_family(r0);
        for m in [2.0, 6.0] {
            let q = contraction_integral(&w, 0.6, m).unwrap().value;
            let s = simpson(&w, 0.6, m, 200_000);
            assert!((q - s).abs() <= 1e-5 * s, "r0 {r0} m {m}: {q} vs {s}");
        }
    }
}

#[test]
fn m_alpha_matches_dense_simpson_search() {
    let set = calibration_set(16, 4);
    let m = solve_on_set(0.5, &set).unwrap();
    let target = (-1.0f64).exp() * (1.0 + CONTRACTION_SLACK);
    let first = (1..=50u32)
        .find(|&k| set.iter().all(|w| simpson(w, 0.5, k as f64, 1_000_000) * w.norm().sqrt() <= target))
        .unwrap();
    assert_eq!(m, first);
    assert_eq!(solve_m_alpha(0.5, 16, 4).unwrap(), m);
}

#[test]
fn m_alpha_fixtures_and_monotonicity() {
    let m: Vec<u32> = [0.5, 0.75, 0.9].iter().map(|&a| solve_m_alpha(a, 256, 1).unwrap()).collect();
    assert_eq!(m, vec![8, 12, 26]);
    assert!(m[2] >= m[0]);
}

#[test]
fn m_alpha_not_found_near_one() {
    assert_eq!(solve_m_alpha(0.999, 16, 1), Err(MargulisError::NotFound { cap: M_CAP }));
    assert!(matches!(solve_m_alpha(0.3, 16, 1), Err(MargulisError::InvalidAlpha { .. })));
}

#[test]
fn fresh_directions_contract_at_m_alpha() {
    for (alpha, m) in [(0.5, 8.0), (0.75, 12.0), (0.9, 26.0)] {
        let mut rng = rng_for(77, 1, 0);
        for _ in 0..200 {
            let w = random_unit(&mut rng);
            let rep = contraction_check(&w, alpha, m).unwrap();
            assert!(contracts(rep.ratio), "alpha {alpha}: ratio {}", rep.ratio);
            assert!(rep.pass, "fitted bound violated: {} > {}", rep.lhs, rep.bound);
        }
    }
}

#[test]
fn c5_fit_is_frozen() {
    let set = calibration_set(64, 1);
    let ms: Vec<f64> = (1..=60).map(f64::from).collect();
    let c = contraction_c5_fit(&set, &[0.5, 0.75, 0.9], &ms).unwrap();
    assert!(c <= C5_FIT, "{c}");
    assert!(c >= 0.9 * C5_FIT, "{c}");
}

#[test]
fn zero_vector_rejected() {
    assert_eq!(contraction_integral(&LieVector::ZERO, 0.5, 1.0), Err(MargulisError::ZeroVector));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn contraction_ratio_scale_free(v in prop::array::uniform6(-1.0f64..1.0), lam in 0.01f64..100.0) {
            let w = LieVector::from_array(&v);
            prop_assume!(w.norm() > 1e-3);
            let a = contraction_ratio(&w, 0.6, 4.0).unwrap();
            let b = contraction_ratio(&(w * lam), 0.6, 4.0).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * a);
        }

        #[test]
        fn integrand_bounds(v in prop::array::uniform6(-1.0f64..1.0), r in 0.0f64..1.0) {
            let w = LieVector::from_array(&v);
            prop_assume!(w.norm() > 1e-3);
            let n = pushed_norm(&w, 3.0, r);
            let o = norm_oracle(&w, 3.0, r);
            prop_assert!((n - o).abs() <= 1e-12 * (1.0 + o));
        }
    }
}
