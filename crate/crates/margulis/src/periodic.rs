//! Margulis function of the closed orbit `Y = H eGamma`.

use crate::sheets::Displacements;
use horolab_lattice::{inj_value, reduce_point, LatticeCache, LatticeKind, QuotientPoint};
use horolab_lie::{split_near_h, GroupElement, M2r};
use horolab_mc::{par_draws, par_map, Rng};
use serde::Serialize;

const LABEL_PERIODIC: u64 = 0x53;

/// Hyperbolic area of the `SL2(Z)` fundamental domain, the covolume of `Y`.
pub const PERIODIC_COVOLUME: f64 = std::f64::consts::FRAC_PI_3;

/// Default cutoff factor: `I(y) = {w : 0 < ||w|| < delta0 inj(y), exp(w) y in Y}`.
pub const DEFAULT_DELTA0: f64 = 1.0;

/// Reconstruction slack for accepting a split `k = h exp(w)` with `h` in `H`.
const SPLIT_TOL: f64 = 1e-9;
/// Displacements closer than this are one.
const DEDUP_TOL: f64 = 1e-10;

/// Largest accepted `||q - I||` for the split quotient `q` (`conj(k)^-1 k`
/// or `k2^-1 k1`); inside this the principal logarithm is reliable.
const LOG_REGION: f64 = 0.5;

fn split_defect(k: &GroupElement) -> f64 {
    match k {
        GroupElement::Sl2C(m) => {
            let cj = m.map(|z| z.conj());
            let adj = horolab_lie::M2c::new(cj[(1, 1)], -cj[(0, 1)], -cj[(1, 0)], cj[(0, 0)]);
            let q = adj * m - horolab_lie::M2c::identity();
            q.iter().fold(0.0, |a, z| a.max(z.norm()))
        }
        GroupElement::Product(a, b) => {
            let adj = M2r::new(b[(1, 1)], -b[(0, 1)], -b[(1, 0)], b[(0, 0)]);
            (adj * a - M2r::identity()).iter().fold(0.0, |x, z| x.max(z.abs()))
        }
    }
}

/// `Haar`-distributed point of `SL2(R)/SL2(Z)` as an element of `H`:
/// `z = x + iy` uniform in the standard domain for `dx dy / y^2`, times a
/// uniform rotation. The symmetric point of the result is `z`.
pub fn haar_periodic_point<R: Rng + ?Sized>(kind: LatticeKind, rng: &mut R) -> GroupElement {
    let th = rng.gen_range(-std::f64::consts::FRAC_PI_6..std::f64::consts::FRAC_PI_6);
    let x = th.sin();
    let y = (1.0 - x * x).sqrt() / (1.0 - rng.gen::<f64>());
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let (c, s) = (phi.cos(), phi.sin());
    let k_t = M2r::new(c, s, -s, c);
    let a = M2r::new(y.sqrt(), 0.0, 0.0, 1.0 / y.sqrt());
    let um = M2r::new(1.0, 0.0, x, 1.0);
    GroupElement::from_h(kind.group(), &(k_t * a * um))
}

/// `n` reduced samples of `mu_Y`.
pub fn periodic_sample(kind: LatticeKind, n: usize, seed: u64) -> Vec<QuotientPoint> {
    par_draws(seed, LABEL_PERIODIC, n, |rng| reduce_point(&haar_periodic_point(kind, rng), kind))
}

/// `I(y, delta0)` via the cache: `exp(w) y` is in `Y` iff `g gamma g^-1 = h exp(w)`
/// for some cached `gamma`, with `h` in `H` (`g` the representative of `y`).
pub fn periodic_displacements(y: &QuotientPoint, delta0: f64, cache: &LatticeCache) -> Displacements {
    let inj = inj_value(y, cache);
    let cutoff = delta0 * inj;
    let g = y.rep;
    let gi = g.inv();
    let mut vectors: Vec<horolab_lie::Sl2> = Vec::new();
    for i in 0..cache.len() {
        let k = g * *cache.float(i) * gi;
        if split_defect(&k) > LOG_REGION {
            continue;
        }
        let (h, w) = split_near_h(&k);
        let n = w.norm();
        if !(n > 0.0 && n < cutoff) {
            continue;
        }
        let rec = h * horolab_lie::exp_lie(g.group(), &horolab_lie::LieVector::from_r(w));
        if rec.dist(&k) > SPLIT_TOL * k.max_entry() {
            continue;
        }
        if vectors.iter().all(|v| (*v - w).norm() > DEDUP_TOL) {
            vectors.push(w);
        }
    }
    Displacements { vectors, inj }
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicStats {
    pub n: usize,
    pub alpha: f64,
    pub delta0: f64,
    /// Empirical mean of `f_Y`.
    pub mean_f: f64,
    pub stderr_f: f64,
    pub mean_count: f64,
    pub max_count: usize,
    pub fallback_fraction: f64,
    pub covolume: f64,
    /// `max #I(y) / v`.
    pub count_ratio: f64,
    /// `mean f_Y / v`.
    pub f_ratio: f64,
}

pub fn periodic_orbit_f(sample: &[QuotientPoint], alpha: f64, delta0: f64, cache: &LatticeCache) -> PeriodicStats {
    let rows: Vec<(f64, usize)> = par_map(sample, |y| {
        let d = periodic_displacements(y, delta0, cache);
        (d.f(alpha), d.vectors.len())
    });
    let n = rows.len();
    let nf = n as f64;
    let mean_f = rows.iter().map(|r| r.0).sum::<f64>() / nf;
    let var = if n > 1 { rows.iter().map(|r| (r.0 - mean_f).powi(2)).sum::<f64>() / (nf - 1.0) } else { 0.0 };
    let max_count = rows.iter().map(|r| r.1).max().unwrap_or(0);
    PeriodicStats {
        n,
        alpha,
        delta0,
        mean_f,
        stderr_f: (var / nf).sqrt(),
        mean_count: rows.iter().map(|r| r.1 as f64).sum::<f64>() / nf,
        max_count,
        fallback_fraction: rows.iter().filter(|r| r.1 == 0).count() as f64 / nf,
        covolume: PERIODIC_COVOLUME,
        count_ratio: max_count as f64 / PERIODIC_COVOLUME,
        f_ratio: mean_f / PERIODIC_COVOLUME,
    }
}
