use horolab_projection::*;
use proptest::prelude::*;

#[test]
fn two_points_at_unit_distance() {
    let f = [Sl2::ZERO, Sl2::new(0.0, 1.0, 0.0)];
    assert_eq!(alpha_energy(&f, 0.5).unwrap(), vec![1.0, 1.0]);
}

#[test]
fn equally_spaced_segment_matches_direct_sum() {
    let n = 200;
    let h = 1.0 / n as f64;
    let f: Vec<Sl2> = (0..n).map(|k| Sl2::new(0.0, k as f64 * h, 0.0)).collect();
    let alpha = 0.6;
    let got = alpha_energy(&f, alpha).unwrap();
    for (i, g) in got.iter().enumerate() {
        // distances are |i - j| h; sum the integer gaps directly
        let want: f64 = (0..n).filter(|&j| j != i).map(|j| ((i as f64 - j as f64).abs() * h).powf(-alpha)).sum();
        assert!((g - want).abs() <= 1e-12 * want, "{i}: {g} vs {want}");
    }
}

#[test]
fn duplicates_rejected() {
    let f = [Sl2::new(0.1, 0.2, 0.3), Sl2::ZERO, Sl2::new(0.1, 0.2, 0.3)];
    assert_eq!(alpha_energy(&f, 0.5), Err(ProjectionError::DuplicatePoints { i: 0, j: 2 }));
}

#[test]
fn energy_constant_of_grid() {
    let d = energy_constant(&uniform_grid(8), 0.6, 0.02).unwrap();
    assert!(d >= 1.0 && d < 10.0, "{d}");
}

fn small_set() -> impl Strategy<Value = Vec<Sl2>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 2..30)
        .prop_map(|v| v.into_iter().map(|(a, b, c)| Sl2::new(a, b, c)).collect())
}

proptest! {
    #[test]
    fn homogeneity(f in small_set(), lambda in 0.1f64..10.0, alpha in 0.1f64..1.0) {
        let base = alpha_energy(&f, alpha).unwrap();
        let s = alpha_energy(&scaled(&f, lambda), alpha).unwrap();
        for (x, y) in base.iter().zip(&s) {
            prop_assert!((y - x * lambda.powf(-alpha)).abs() <= 1e-10 * y.abs().max(1.0));
        }
    }

    #[test]
    fn symmetric_pair_sums(f in small_set(), alpha in 0.1f64..1.0) {
        // each pair contributes to both endpoints
        let total: f64 = alpha_energy(&f, alpha).unwrap().iter().sum();
        let mut pairs = 0.0;
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                pairs += (f[i] - f[j]).norm().powf(-alpha);
            }
        }
        prop_assert!((total - 2.0 * pairs).abs() <= 1e-9 * total);
    }
}
