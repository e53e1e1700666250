//! Finitely supported probability measures on `[0, 1]`.

use crate::{EquidistError, Result};
use horolab_projection::{interval_regularity, IntervalRegularity};
use serde::{Deserialize, Serialize};

/// Default ceiling for the constant in `rho(J) <= C |J|^exponent`.
pub const RHO_CONSTANT_CAP: f64 = 4.0;
/// Upper end of the admissible single scales `b`.
pub const MAX_SCALE: f64 = 0.1;
const WEIGHT_TOL: f64 = 1e-12;
/// Finest scale tried by [`SparseMeasure::fitted`] is `2^-MIN_SCALE_EXP`.
pub const MIN_SCALE_EXP: i32 = 40;

/// Single-scale record `max_{|J| = b} rho(J) <= constant * b^exponent`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleRegularity {
    pub b: f64,
    pub exponent: f64,
    pub constant: f64,
    /// A window attaining the maximum.
    pub worst: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseMeasure {
    /// Sorted ascending.
    pub support: Vec<f64>,
    pub weights: Vec<f64>,
    pub regularity: ScaleRegularity,
}

/// Exact maximum of `rho([s, s + b])` over all `s`, by two pointers.
pub fn max_window_mass(support: &[f64], weights: &[f64], b: f64) -> (f64, (f64, f64)) {
    let mut best = (0.0, (0.0, b));
    let mut hi = 0;
    let mut mass = 0.0;
    for lo in 0..support.len() {
        while hi < support.len() && support[hi] <= support[lo] + b {
            mass += weights[hi];
            hi += 1;
        }
        if mass > best.0 {
            best = (mass, (support[lo], support[lo] + b));
        }
        mass -= weights[lo];
    }
    best
}

impl SparseMeasure {
    /// Sorts, validates and records regularity at scale `b` with exponent `1 - eps`.
    pub fn new(support: Vec<f64>, weights: Vec<f64>, b: f64, eps: f64) -> Result<Self> {
        if support.is_empty() || support.len() != weights.len() {
            return Err(EquidistError::InvalidMeasure("empty or mismatched support".into()));
        }
        if support.iter().any(|s| !(0.0..=1.0).contains(s)) {
            return Err(EquidistError::InvalidMeasure("support leaves [0, 1]".into()));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > WEIGHT_TOL {
            return Err(EquidistError::InvalidMeasure("weights are not a probability vector".into()));
        }
        if !(b > 0.0 && b <= MAX_SCALE) || !(0.0..1.0).contains(&eps) {
            return Err(EquidistError::InvalidParameter(format!("b = {b}, eps = {eps}")));
        }
        let mut pairs: Vec<(f64, f64)> = support.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (support, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let exponent = 1.0 - eps;
        let (mass, worst) = max_window_mass(&support, &weights, b);
        let regularity = ScaleRegularity { b, exponent, constant: mass / b.powf(exponent), worst };
        Ok(SparseMeasure { support, weights, regularity })
    }

    pub fn uniform(support: Vec<f64>, b: f64, eps: f64) -> Result<Self> {
        let n = support.len();
        SparseMeasure::new(support, vec![1.0 / n as f64; n], b, eps)
    }

    pub fn dirac(s: f64, b: f64, eps: f64) -> Result<Self> {
        SparseMeasure::new(vec![s], vec![1.0], b, eps)
    }

    /// Uniform on the given atoms at the smallest dyadic `b <= MAX_SCALE`
    /// (down to `2^-MIN_SCALE_EXP`) whose constant is at most `cap`. Only the
    /// single scale `b` enters the hypothesis, so failing coarser scales are skipped.
    pub fn fitted(support: Vec<f64>, eps: f64, cap: f64) -> Result<Self> {
        let n = support.len();
        let weights = vec![1.0 / n as f64; n];
        let mut sorted = support.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let top = MAX_SCALE.log2().floor() as i32;
        let chosen = (-top..=MIN_SCALE_EXP)
            .rev()
            .map(|j| 2f64.powi(-j))
            .find(|&b| max_window_mass(&sorted, &weights, b).0 / b.powf(1.0 - eps) <= cap)
            .ok_or_else(|| EquidistError::InvalidMeasure(format!("no scale below {MAX_SCALE} meets C <= {cap}")))?;
        SparseMeasure::new(support, weights, chosen, eps)
    }

    /// Translates atoms by `-min` so they start at 0; returns the shift.
    /// `v_s x = v_{s - m} (v_m x)`, so averages move the base point by `v_m`.
    pub fn fitted_shifted(support: &[f64], eps: f64, cap: f64) -> Result<(f64, Self)> {
        let m = support.iter().copied().fold(f64::INFINITY, f64::min);
        let shifted: Vec<f64> = support.iter().map(|s| (s - m).max(0.0)).collect();
        Ok((m, SparseMeasure::fitted(shifted, eps, cap)?))
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// `|log b| / 4 <= t <= |log b| / 2`.
    pub fn window(&self) -> (f64, f64) {
        let l = self.regularity.b.ln().abs();
        (l / 4.0, l / 2.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoCheck {
    pub pass: bool,
    pub constant: f64,
    pub cap: f64,
    /// The interval with the largest ratio; the violating one when `pass` is false.
    pub worst_interval: (f64, f64),
    pub scan: IntervalRegularity,
}

/// Dyadic and half-shifted intervals from the support span down to `floor`.
pub fn rho_regularity_check(rho: &SparseMeasure, exponent: f64, floor: f64, cap: f64) -> RhoCheck {
    let scan = interval_regularity(&rho.support, &rho.weights, exponent, floor);
    RhoCheck { pass: scan.constant <= cap, constant: scan.constant, cap, worst_interval: scan.worst, scan }
}
