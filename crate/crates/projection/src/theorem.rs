//! Statement-level verification of the projection theorem on a finite grid
//! of directions and dyadic scales.

use crate::certificate::{dyadic_scales, PointSetMeasure};
use crate::geometry::{ad_u, xi};
use crate::{ProjectionError, Result};
use horolab_lie::Sl2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Required mass of good directions and of good points per direction.
pub const GOOD_FRACTION: f64 = 0.9;
/// Smallest admissible direction interval.
pub const MIN_INTERVAL: f64 = 1e-6;
pub const DEFAULT_DIRECTIONS: usize = 256;
/// Rotations tried by [`general_position`], in order.
pub const GENERAL_POSITION_ROTATIONS: [f64; 3] = [0.0, 0.1, 0.9];
/// `|w12| >= GENERAL_POSITION_RATIO ||w||` defines general position.
pub const GENERAL_POSITION_RATIO: f64 = 1e-3;
/// Relative tolerance for detecting a set on a single `E12` line.
const FIBER_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremConfig {
    pub kappa: f64,
    /// Direction interval `J`.
    pub interval: (f64, f64),
    /// Midpoint grid size on `J`.
    pub directions: usize,
    pub seed: u64,
}

impl TheoremConfig {
    pub fn new(kappa: f64) -> Self {
        TheoremConfig { kappa, interval: (0.0, 1.0), directions: DEFAULT_DIRECTIONS, seed: 0 }
    }

    pub fn direction_grid(&self) -> Vec<f64> {
        let (a, b) = self.interval;
        let h = (b - a) / self.directions as f64;
        (0..self.directions).map(|i| a + (i as f64 + 0.5) * h).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub interval: (f64, f64),
    pub directions: usize,
    pub b0: f64,
    pub b1: f64,
    pub scales: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub alpha: f64,
    pub kappa: f64,
    /// `alpha - 7 kappa`.
    pub exponent: f64,
    pub b1: f64,
    pub grid: GridSpec,
    pub directions: Vec<f64>,
    /// Per direction, the smallest constant that covers 90% of the points.
    pub direction_constants: Vec<f64>,
    /// Indices into `directions` forming `J'`.
    pub good_directions: Vec<usize>,
    /// `E_r` for each entry of `good_directions`, as indices into `E`.
    pub good_subsets: Vec<Vec<u32>>,
    pub fitted_c: f64,
    pub good_direction_fraction: f64,
    pub good_point_fraction_min: f64,
    /// `E` lies on one `E12` line, so `xi_r` differences do not depend on `r`.
    pub direction_independent: bool,
    pub pass: bool,
    pub seed: u64,
}

/// JSON face of a [`ProjectionReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSummary {
    pub alpha: f64,
    pub kappa: f64,
    pub b1: f64,
    pub good_direction_fraction: f64,
    pub good_point_fraction_min: f64,
    #[serde(rename = "fitted_C")]
    pub fitted_c: f64,
    pub grid_spec: GridSpec,
    pub seed: u64,
}

impl ProjectionReport {
    pub fn summary(&self) -> ProjectionSummary {
        ProjectionSummary {
            alpha: self.alpha,
            kappa: self.kappa,
            b1: self.b1,
            good_direction_fraction: self.good_direction_fraction,
            good_point_fraction_min: self.good_point_fraction_min,
            fitted_c: self.fitted_c,
            grid_spec: self.grid.clone(),
            seed: self.seed,
        }
    }
}

/// `#{w' : |xi_r(w') - c| <= b}` given the sorted projections.
fn window_count(sorted: &[f64], c: f64, b: f64) -> usize {
    let lo = sorted.partition_point(|&x| x < c - b);
    let hi = sorted.partition_point(|&x| x <= c + b);
    hi - lo
}

/// `#{w' in E : |xi_r(w') - xi_r(w)| <= b} / #E`, by linear scan.
pub fn projection_multiplicity(e: &[Sl2], r: f64, w: &Sl2, b: f64) -> f64 {
    let c = xi(w, r);
    e.iter().filter(|p| (xi(p, r) - c).abs() <= b).count() as f64 / e.len() as f64
}

/// Smallest `C` with at least `ceil(frac n)` of `values` at most `C`.
fn quantile(values: &[f64], frac: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let k = ((frac * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[k - 1]
}

fn on_e12_line(e: &[Sl2]) -> bool {
    if e.len() < 2 {
        return false;
    }
    let scale = e.iter().fold(0.0f64, |m, w| m.max(w.norm())).max(f64::MIN_POSITIVE);
    let tol = FIBER_TOL * scale;
    e.iter().all(|w| (w.a - e[0].a).abs() <= tol && (w.c - e[0].c).abs() <= tol)
}

pub fn verify_projection_theorem(e: &PointSetMeasure, cfg: &TheoremConfig) -> Result<ProjectionReport> {
    let cert = e.certificate.as_ref().ok_or(ProjectionError::CertificateMissing)?;
    let (ja, jb) = cfg.interval;
    if jb - ja < MIN_INTERVAL {
        return Err(ProjectionError::InvalidParameter(format!("|J| = {} below {MIN_INTERVAL}", jb - ja)));
    }
    if !(cfg.kappa > 0.0 && cfg.kappa < 0.1) || cfg.directions == 0 {
        return Err(ProjectionError::InvalidParameter(format!(
            "kappa = {}, directions = {}",
            cfg.kappa, cfg.directions
        )));
    }
    let pts = &e.points;
    let n = pts.len() as f64;
    let b1 = e.b1;
    let exponent = cert.alpha - 7.0 * cfg.kappa;
    let scales = dyadic_scales(e.b0, b1);
    let norms: Vec<f64> = scales.iter().map(|b| (b / b1).powf(exponent)).collect();
    let dirs = cfg.direction_grid();

    let per_dir: Vec<(f64, Vec<u32>)> = dirs
        .par_iter()
        .map(|&r| {
            let proj: Vec<f64> = pts.iter().map(|w| xi(w, r)).collect();
            let mut sorted = proj.clone();
            sorted.sort_by(|a, b| a.total_cmp(b));
            let q: Vec<f64> = proj
                .iter()
                .map(|&c| {
                    scales
                        .iter()
                        .zip(&norms)
                        .map(|(&b, &nb)| window_count(&sorted, c, b) as f64 / n / nb)
                        .fold(0.0, f64::max)
                })
                .collect();
            let cr = quantile(&q, GOOD_FRACTION);
            let good: Vec<u32> = (0..q.len()).filter(|&i| q[i] <= cr).map(|i| i as u32).collect();
            (cr, good)
        })
        .collect();

    let direction_constants: Vec<f64> = per_dir.iter().map(|d| d.0).collect();
    let fitted_c = quantile(&direction_constants, GOOD_FRACTION);
    let good_directions: Vec<usize> = (0..dirs.len()).filter(|&i| direction_constants[i] <= fitted_c).collect();
    let good_subsets: Vec<Vec<u32>> = good_directions.iter().map(|&i| per_dir[i].1.clone()).collect();
    let good_direction_fraction = good_directions.len() as f64 / dirs.len() as f64;
    let good_point_fraction_min = good_subsets.iter().map(|s| s.len() as f64 / n).fold(1.0, f64::min);
    let pass = fitted_c.is_finite()
        && good_direction_fraction >= GOOD_FRACTION
        && good_point_fraction_min >= GOOD_FRACTION;
    Ok(ProjectionReport {
        alpha: cert.alpha,
        kappa: cfg.kappa,
        exponent,
        b1,
        grid: GridSpec { interval: cfg.interval, directions: cfg.directions, b0: e.b0, b1, scales: scales.len() },
        directions: dirs,
        direction_constants,
        good_directions,
        good_subsets,
        fitted_c,
        good_direction_fraction,
        good_point_fraction_min,
        direction_independent: on_e12_line(pts),
        pass,
        seed: cfg.seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralPosition {
    pub r0: f64,
    /// Indices into the input of the kept points.
    pub indices: Vec<usize>,
    /// `Ad(u_r0) w` for the kept points.
    pub rotated: Vec<Sl2>,
}

/// First `r0` in `{0, 0.1, 0.9}` for which at least a quarter of
/// `Ad(u_r0) E` satisfies `|w12| >= 1e-3 ||w||`.
pub fn general_position(e: &[Sl2]) -> Result<GeneralPosition> {
    if e.is_empty() {
        return Err(ProjectionError::Empty);
    }
    for &r0 in &GENERAL_POSITION_ROTATIONS {
        let mut indices = Vec::new();
        let mut rotated = Vec::new();
        for (i, w) in e.iter().enumerate() {
            let v = ad_u(w, r0);
            if v.b.abs() >= GENERAL_POSITION_RATIO * v.norm() {
                indices.push(i);
                rotated.push(v);
            }
        }
        if 4 * indices.len() >= e.len() {
            return Ok(GeneralPosition { r0, indices, rotated });
        }
    }
    Err(ProjectionError::GeneralPositionFail)
}
