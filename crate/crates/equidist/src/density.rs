//! Covering radius of `B_P(e, T) x0` against a grid of thick test points.

use crate::labels;
use horolab_lattice::{
    inj_value, near_stabilizer_search, reduce_point, LatticeCache, LatticeKind, OrbitFrames, QuotientPoint,
    StabilizerReport,
};
use horolab_lie::{a_elem, n_elem, u_elem, AmbientGroup, GroupElement};
use horolab_mc::{par_draws, Rng};
use serde::{Deserialize, Serialize};

/// Residual tolerance of the near-stabilizer detector.
pub const STABILIZER_TOL: f64 = 1e-8;
/// Flow time used to draw approximately Haar-distributed test points.
pub const TEST_GRID_T: f64 = 8.0;

/// `a_tau u_r` with `||g - I|| <= T` in the max-entry norm: `e^{tau/2}`
/// log-uniform on `[1/(1+T), 1+T]`, then `r` uniform on `|r| <= T e^{-tau/2}`.
pub fn sample_p_ball<R: Rng + ?Sized>(grp: AmbientGroup, big_t: f64, rng: &mut R) -> GroupElement {
    let l = (1.0 + big_t).ln();
    let half = rng.gen_range(-l..l);
    let rmax = big_t * (-half).exp();
    a_elem(grp, 2.0 * half) * u_elem(grp, rng.gen_range(-rmax..rmax))
}

/// Reduced points `a_T n(r, s) e Gamma` with `(r, s)` uniform, kept when `inj >= eta`.
pub fn test_grid(kind: LatticeKind, n: usize, eta: f64, seed: u64, cache: &LatticeCache) -> Vec<QuotientPoint> {
    let grp = kind.group();
    let at = a_elem(grp, TEST_GRID_T);
    let mut out = Vec::with_capacity(n);
    let mut round = 0u64;
    while out.len() < n {
        let batch = par_draws(seed, labels::TEST_GRID + (round << 8), 4 * n, |rng| {
            reduce_point(&(at * n_elem(grp, rng.gen::<f64>(), rng.gen::<f64>())), kind)
        });
        out.extend(batch.into_iter().filter(|z| inj_value(z, cache) >= eta).take(n - out.len()));
        round += 1;
        assert!(round < 64, "thick part not reached");
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    #[serde(rename = "T")]
    pub big_t: f64,
    pub covering_radius: f64,
    pub n_samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityTable {
    pub rows: Vec<DensityRow>,
    /// Least-squares slope of `log covering_radius` against `log T`.
    pub fitted_exponent: f64,
    pub stabilizer: StabilizerReport,
}

impl DensityTable {
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].covering_radius < w[0].covering_radius)
    }

    /// Relative drop of the covering radius from the first to the last row.
    pub fn relative_drop(&self) -> f64 {
        let (a, b) = (self.rows[0].covering_radius, self.rows[self.rows.len() - 1].covering_radius);
        (a - b) / a
    }
}

/// `x0` moved by a sample of `B_P(e, T)`, reduced.
pub fn p_ball_cloud(x0: &QuotientPoint, big_t: f64, samples: usize, seed: u64) -> Vec<QuotientPoint> {
    let grp = x0.rep.group();
    par_draws(seed, labels::DENSITY, samples, |rng| reduce_point(&(sample_p_ball(grp, big_t, rng) * x0.rep), x0.lattice))
}

/// For each `T`, the largest distance from a test point to the cloud.
///
/// Clouds are nested: row `k` adds `samples` fresh points of `B_P(e, T_k)` to
/// the cloud of row `k - 1`, so each row's cloud lies in its own ball.
pub fn density_scan(
    x0: &QuotientPoint,
    t_grid: &[f64],
    tests: &[QuotientPoint],
    samples: usize,
    seed: u64,
    cache: &LatticeCache,
) -> DensityTable {
    let orbits: Vec<OrbitFrames> = tests.iter().map(|z| OrbitFrames::new(z, cache)).collect();
    let mut best = vec![f64::INFINITY; tests.len()];
    let mut total = 0;
    let rows: Vec<DensityRow> = t_grid
        .iter()
        .enumerate()
        .map(|(k, &big_t)| {
            let row_seed = seed.wrapping_add(k as u64);
            let cloud = p_ball_cloud(x0, big_t, samples, row_seed);
            let jobs: Vec<(&OrbitFrames, f64)> = orbits.iter().zip(best.iter().copied()).collect();
            best = horolab_mc::par_map(&jobs, |&(o, mut b)| {
                for y in &cloud {
                    if let Some(d) = o.distance_within(y, b) {
                        b = d;
                    }
                }
                b
            });
            total += samples;
            DensityRow { big_t, covering_radius: best.iter().copied().fold(0.0, f64::max), n_samples: total, seed: row_seed }
        })
        .collect();
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.big_t.ln(), r.covering_radius.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let fitted_exponent = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    DensityTable { rows, fitted_exponent, stabilizer: near_stabilizer_search(x0, STABILIZER_TOL, cache) }
}

/// Distance of `g` from `H`: largest imaginary entry for `SL2(C)`, largest
/// entry of the factor difference for the product.
pub fn h_defect(g: &GroupElement) -> f64 {
    match g {
        GroupElement::Sl2C(m) => m.iter().fold(0.0f64, |a, z| a.max(z.im.abs())),
        GroupElement::Product(a, b) => (a - b).iter().fold(0.0f64, |m, z| m.max(z.abs())),
    }
}

/// `h_defect` of the unreduced representative `rep (delta^T)^-1` of a reduced point.
pub fn orbit_defect(y: &QuotientPoint) -> f64 {
    let kind = y.lattice;
    let undo = y.delta.transpose(kind).inv(kind).to_group(kind);
    h_defect(&(y.rep * undo))
}
