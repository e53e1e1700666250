//! Monte Carlo check of `int f(h, z) d nu^(l) <= e^-l f(e, z) + C13 sum_j e^{j - l} int psi d nu^(j)`.

use crate::sheets::{SheetPoint, SheetSet};
use crate::walk::RandomWalk;
use horolab_lattice::LatticeCache;
use horolab_lie::M2r;
use horolab_mc::{par_means, Estimate};
use serde::Serialize;

const LABEL_INEQUALITY: u64 = 0x52;

/// Frozen `C13`: twice the largest fit (0.79) over 16-sheet and one-sheet
/// sets at `e` and `a_2` of `SL2(Z[i])`, alpha = 0.5, m = 8, l = 1..3.
pub const C13_FIXTURE: f64 = 1.6;

/// Required relative standard error of every Monte Carlo mean.
pub const MC_REL_ERR: f64 = 0.05;

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub ell: usize,
    pub f_e: f64,
    /// `int f(h, z) d nu^(l)`.
    pub lhs: EstimateJson,
    /// `int psi(h, z) d nu^(j)` for `j = 1..=l`.
    pub psi: Vec<EstimateJson>,
    /// Smallest constant making the inequality hold at the estimated means.
    pub c13_needed: f64,
    pub c13: f64,
    pub rhs: f64,
    /// Fraction of draws with no displacement at depth `l`.
    pub fallback_fraction: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EstimateJson {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

impl From<Estimate> for EstimateJson {
    fn from(e: Estimate) -> Self {
        EstimateJson { mean: e.mean, stderr: e.stderr, n: e.n }
    }
}

/// Report at depth `walk.ell`; see `verify_depths`.
pub fn verify_margulis_inequality(
    set: &SheetSet,
    walk: &RandomWalk,
    z: &SheetPoint,
    samples: usize,
    seed: u64,
    cache: &LatticeCache,
    c13: f64,
) -> InequalityReport {
    verify_depths(set, walk, z, samples, seed, cache, c13).pop().expect("at least one depth")
}

/// Reports for every depth `0..=walk.ell` from one pass over `samples` draws
/// of `nu^(ell)`; depth `j` uses the draw truncated to `j` steps. A depth
/// passes iff each of its means has relative error at most `MC_REL_ERR` and
/// `lhs - 2 se <= rhs + 2 C13 se(psi terms)`.
pub fn verify_depths(
    set: &SheetSet,
    walk: &RandomWalk,
    z: &SheetPoint,
    samples: usize,
    seed: u64,
    cache: &LatticeCache,
    c13: f64,
) -> Vec<InequalityReport> {
    let alpha = walk.alpha;
    let ell = walk.ell;
    let at_e = set.displacements(&M2r::identity(), z, cache);
    let f_e = at_e.f(alpha);
    let mut out = vec![InequalityReport {
        ell: 0,
        f_e,
        lhs: EstimateJson { mean: f_e, stderr: 0.0, n: 1 },
        psi: vec![],
        c13_needed: 0.0,
        c13,
        rhs: f_e,
        fallback_fraction: at_e.vectors.is_empty() as u8 as f64,
        pass: true,
    }];
    if ell == 0 {
        return out;
    }
    // Slots per depth j (1-based): 3(j-1) = f, +1 = psi, +2 = fallback indicator.
    let est = par_means(seed, LABEL_INEQUALITY, samples, 3 * ell, |rng, slot| {
        let d = walk.draw(rng);
        for j in 1..=ell {
            let disp = set.displacements(&walk.element(j, d.r_hat[j - 1]), z, cache);
            let k = 3 * (j - 1);
            slot[k] = disp.f(alpha);
            slot[k + 1] = disp.psi(alpha);
            slot[k + 2] = disp.vectors.is_empty() as u8 as f64;
        }
    });
    for l in 1..=ell {
        let lhs = est[3 * (l - 1)];
        let psi: Vec<Estimate> = (1..=l).map(|j| est[3 * (j - 1) + 1]).collect();
        let weight = |j: usize| (j as f64 - l as f64).exp();
        let weighted: f64 = psi.iter().enumerate().map(|(i, e)| weight(i + 1) * e.mean).sum();
        let weighted_se: f64 =
            psi.iter().enumerate().map(|(i, e)| (weight(i + 1) * e.stderr).powi(2)).sum::<f64>().sqrt();
        let decay = (-(l as f64)).exp() * f_e;
        let rhs = decay + c13 * weighted;
        let precise = lhs.rel_err() <= MC_REL_ERR && psi.iter().all(|e| e.rel_err() <= MC_REL_ERR);
        out.push(InequalityReport {
            ell: l,
            f_e,
            lhs: lhs.into(),
            psi: psi.iter().map(|&e| e.into()).collect(),
            c13_needed: (lhs.mean - decay).max(0.0) / weighted,
            c13,
            rhs,
            fallback_fraction: est[3 * (l - 1) + 2].mean,
            pass: precise && lhs.mean - 2.0 * lhs.stderr <= rhs + 2.0 * c13 * weighted_se,
        });
    }
    out
}
