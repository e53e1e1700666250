//! Monte Carlo averages over expanded pieces of `N`.
//!
//! Every routine takes a family of test functions and evaluates all of them
//! on the same draws; the single-function forms are thin wrappers.

use crate::function::TestFunction;
use crate::labels;
use crate::measure::SparseMeasure;
use horolab_lattice::{reduce_point, QuotientPoint};
use horolab_lie::{a_elem, n_elem, u_elem, v_elem};
use horolab_mc::{par_means, Estimate, Rng};
use serde::{Deserialize, Serialize};

/// Flow time of the Haar oracle.
pub const HAAR_ORACLE_T: f64 = 10.0;

fn exact(fs: &[TestFunction], samples: usize) -> Option<Vec<Estimate>> {
    fs.iter()
        .all(|f| f.is_constant())
        .then(|| fs.iter().map(|f| Estimate { mean: f.scale, stderr: 0.0, n: samples }).collect())
}

/// `int_{[0,1]^2} f(a_t n(r, s) x) dr ds` for each `f`.
pub fn horospherical_family(fs: &[TestFunction], x: &QuotientPoint, t: f64, samples: usize, seed: u64) -> Vec<Estimate> {
    if let Some(e) = exact(fs, samples) {
        return e;
    }
    let grp = x.rep.group();
    let at = a_elem(grp, t);
    par_means(seed, labels::HORO, samples, fs.len(), |rng, out| {
        let (r, s) = (rng.gen::<f64>(), rng.gen::<f64>());
        let y = reduce_point(&(at * n_elem(grp, r, s) * x.rep), x.lattice);
        for (o, f) in out.iter_mut().zip(fs) {
            *o = f.eval(&y);
        }
    })
}

pub fn horospherical_average(f: &TestFunction, x: &QuotientPoint, t: f64, samples: usize, seed: u64) -> Estimate {
    horospherical_family(std::slice::from_ref(f), x, t, samples, seed)[0]
}

/// Large-`t` horospherical averages standing in for `int f dm_X`.
pub fn haar_oracle_family(fs: &[TestFunction], x: &QuotientPoint, samples: usize, seed: u64) -> Vec<Estimate> {
    horospherical_family(fs, x, HAAR_ORACLE_T, samples, seed)
}

pub fn haar_oracle(f: &TestFunction, x: &QuotientPoint, samples: usize, seed: u64) -> Estimate {
    horospherical_average(f, x, HAAR_ORACLE_T, samples, seed)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseAverage {
    pub estimates: Vec<Estimate>,
    pub t: f64,
    pub window: (f64, f64),
    /// Set when `t` lies outside the window of `rho`.
    pub warning: Option<String>,
}

impl SparseAverage {
    pub fn estimate(&self) -> Estimate {
        self.estimates[0]
    }
}

/// `int_0^1 int f(a_t u_r v_s x) drho(s) dr`: Monte Carlo in `r`, exact in `s`.
pub fn sparse_family(
    fs: &[TestFunction],
    x: &QuotientPoint,
    t: f64,
    rho: &SparseMeasure,
    samples: usize,
    seed: u64,
) -> SparseAverage {
    let window = rho.window();
    let warning = (t < window.0 || t > window.1)
        .then(|| format!("t = {t} outside [{:.4}, {:.4}] for b = {}", window.0, window.1, rho.regularity.b));
    let estimates = exact(fs, samples).unwrap_or_else(|| {
        let grp = x.rep.group();
        let at = a_elem(grp, t);
        let vs: Vec<_> = rho.support.iter().map(|&s| v_elem(grp, s) * x.rep).collect();
        par_means(seed, labels::SPARSE, samples, fs.len(), |rng, out| {
            let left = at * u_elem(grp, rng.gen::<f64>());
            for (g, &w) in vs.iter().zip(&rho.weights) {
                let y = reduce_point(&(left * *g), x.lattice);
                for (o, f) in out.iter_mut().zip(fs) {
                    *o += w * f.eval(&y);
                }
            }
        })
    });
    SparseAverage { estimates, t, window, warning }
}

pub fn sparse_average(
    f: &TestFunction,
    x: &QuotientPoint,
    t: f64,
    rho: &SparseMeasure,
    samples: usize,
    seed: u64,
) -> SparseAverage {
    sparse_family(std::slice::from_ref(f), x, t, rho, samples, seed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: f64,
    pub b: f64,
    /// `max_f |sparse_f(t) - haar_f|`.
    pub discrepancy: f64,
    /// Combined standard error of the maximizing function.
    pub mc_error: f64,
}

/// Discrepancy over `t_grid` against per-function Haar values.
pub fn discrepancy_sweep(
    fs: &[TestFunction],
    x: &QuotientPoint,
    rho: &SparseMeasure,
    t_grid: &[f64],
    samples: usize,
    haar: &[Estimate],
    seed: u64,
) -> Vec<SweepRow> {
    assert_eq!(fs.len(), haar.len());
    t_grid
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let a = sparse_family(fs, x, t, rho, samples, seed.wrapping_add(k as u64));
            let (discrepancy, mc_error) = a
                .estimates
                .iter()
                .zip(haar)
                .map(|(e, h)| ((e.mean - h.mean).abs(), e.stderr.hypot(h.stderr)))
                .fold((0.0, 0.0), |m, d| if d.0 > m.0 { d } else { m });
            SweepRow { t, b: rho.regularity.b, discrepancy, mc_error }
        })
        .collect()
}

/// `t` values evenly spaced across the window of `rho`, endpoints included.
pub fn window_grid(rho: &SparseMeasure, points: usize) -> Vec<f64> {
    let (lo, hi) = rho.window();
    if points < 2 {
        return vec![lo];
    }
    (0..points).map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64).collect()
}

/// Sigmas separating the first and last discrepancy for a sweep to count as decaying.
pub const DECAY_SIGMAS: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayVerdict {
    pub decays: bool,
    /// Least-squares slope of discrepancy against `t`.
    pub slope: f64,
    pub first: f64,
    pub last: f64,
}

/// Decay means a negative fitted slope and a last value below the first by
/// more than `DECAY_SIGMAS` combined standard errors.
pub fn decay_verdict(rows: &[SweepRow]) -> DecayVerdict {
    let n = rows.len() as f64;
    let mt = rows.iter().map(|r| r.t).sum::<f64>() / n;
    let md = rows.iter().map(|r| r.discrepancy).sum::<f64>() / n;
    let sxx: f64 = rows.iter().map(|r| (r.t - mt).powi(2)).sum();
    let sxy: f64 = rows.iter().map(|r| (r.t - mt) * (r.discrepancy - md)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    let gap = first.discrepancy - last.discrepancy;
    DecayVerdict {
        decays: slope < 0.0 && gap > DECAY_SIGMAS * first.mc_error.hypot(last.mc_error),
        slope,
        first: first.discrepancy,
        last: last.discrepancy,
    }
}
