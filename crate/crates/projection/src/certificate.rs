//! Brute-force regularity certificates for finite sets in `r`.

use crate::{ProjectionError, Result};
use horolab_lie::Sl2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Relative slack when re-checking a stored certificate.
pub const CERT_SLACK: f64 = 1e-12;

/// `b1 2^-j` for `j = 0, 1, ...` down to `b0`.
pub fn dyadic_scales(b0: f64, b1: f64) -> Vec<f64> {
    let mut out = vec![b1];
    let mut b = b1;
    while b * 0.5 >= b0 * (1.0 - CERT_SLACK) {
        b *= 0.5;
        out.push(b);
    }
    out
}

/// Outcome of an exhaustive scan of `#(E ∩ B(w, b)) / #E / (b / b1)^alpha`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub alpha: f64,
    /// Largest ratio found; the set is `(alpha, upsilon)`-regular on the scanned range.
    pub upsilon: f64,
    pub b0: f64,
    pub b1: f64,
    pub scales: usize,
    pub centers: usize,
    pub worst_center: [f64; 3],
    pub worst_b: f64,
}

/// Closed max-norm ball counts against a set sorted by `w11`.
pub struct BallCounter {
    pts: Vec<Sl2>,
}

impl BallCounter {
    pub fn new(points: &[Sl2]) -> Self {
        let mut pts = points.to_vec();
        pts.sort_by(|x, y| x.a.total_cmp(&y.a));
        BallCounter { pts }
    }

    pub fn count(&self, c: &Sl2, b: f64) -> usize {
        let lo = self.pts.partition_point(|p| p.a < c.a - b);
        let hi = self.pts.partition_point(|p| p.a <= c.a + b);
        self.pts[lo..hi].iter().filter(|p| (p.b - c.b).abs() <= b && (p.c - c.c).abs() <= b).count()
    }
}

fn lower_corner(points: &[Sl2]) -> Sl2 {
    points.iter().fold(Sl2::new(f64::INFINITY, f64::INFINITY, f64::INFINITY), |m, p| {
        Sl2::new(m.a.min(p.a), m.b.min(p.b), m.c.min(p.c))
    })
}

/// Centers of the occupied side-`b` cells of the grid anchored at `lo`.
fn cell_centers(points: &[Sl2], lo: &Sl2, b: f64) -> Vec<Sl2> {
    let mut cells: Vec<[i64; 3]> = points
        .iter()
        .map(|p| {
            [((p.a - lo.a) / b).floor() as i64, ((p.b - lo.b) / b).floor() as i64, ((p.c - lo.c) / b).floor() as i64]
        })
        .collect();
    cells.sort_unstable();
    cells.dedup();
    cells
        .iter()
        .map(|k| {
            Sl2::new(
                lo.a + (k[0] as f64 + 0.5) * b,
                lo.b + (k[1] as f64 + 0.5) * b,
                lo.c + (k[2] as f64 + 0.5) * b,
            )
        })
        .collect()
}

/// Exhaustive scan over dyadic `b in [b0, b1]` and centers `E ∪ {occupied cell centers}`.
pub fn regularity_scan(points: &[Sl2], alpha: f64, b0: f64, b1: f64) -> Result<Certificate> {
    if points.is_empty() {
        return Err(ProjectionError::Empty);
    }
    if !(b0 > 0.0 && b0 <= b1) {
        return Err(ProjectionError::InvalidParameter(format!("need 0 < b0 <= b1, got {b0}, {b1}")));
    }
    let counter = BallCounter::new(points);
    let n = points.len() as f64;
    let lo = lower_corner(points);
    let scales = dyadic_scales(b0, b1);
    let mut centers_total = 0;
    let mut best = (f64::NEG_INFINITY, Sl2::ZERO, b1);
    for &b in &scales {
        let mut centers = points.to_vec();
        centers.extend(cell_centers(points, &lo, b));
        centers_total += centers.len();
        let norm = (b / b1).powf(alpha);
        let (ratio, idx) = centers
            .par_iter()
            .enumerate()
            .map(|(i, c)| (counter.count(c, b) as f64 / n / norm, i))
            .reduce(|| (f64::NEG_INFINITY, usize::MAX), |x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x });
        if ratio > best.0 {
            best = (ratio, centers[idx], b);
        }
    }
    Ok(Certificate {
        alpha,
        upsilon: best.0,
        b0,
        b1,
        scales: scales.len(),
        centers: centers_total,
        worst_center: best.1.to_array(),
        worst_b: best.2,
    })
}

/// Finite `E ⊂ B(anchor, b1)` with its uniform measure and, optionally, a
/// regularity certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSetMeasure {
    pub points: Vec<Sl2>,
    pub anchor: Sl2,
    pub b0: f64,
    pub b1: f64,
    pub alpha: f64,
    pub certificate: Option<Certificate>,
}

impl PointSetMeasure {
    /// Uncertified measure; checks `E ⊂ B(anchor, b1)`.
    pub fn new(points: Vec<Sl2>, anchor: Sl2, b0: f64, b1: f64, alpha: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(ProjectionError::Empty);
        }
        let radius = points.iter().fold(0.0f64, |m, p| m.max((*p - anchor).norm()));
        if radius > b1 * (1.0 + CERT_SLACK) {
            return Err(ProjectionError::InvalidParameter(format!("set radius {radius} exceeds b1 = {b1}")));
        }
        Ok(PointSetMeasure { points, anchor, b0, b1, alpha, certificate: None })
    }

    /// Measure with a freshly scanned certificate at its own `alpha`.
    pub fn certified(points: Vec<Sl2>, anchor: Sl2, b0: f64, b1: f64, alpha: f64) -> Result<Self> {
        let mut m = Self::new(points, anchor, b0, b1, alpha)?;
        m.certificate = Some(regularity_scan(&m.points, alpha, b0, b1)?);
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Re-runs the scan and checks it against the stored certificate.
    pub fn verify(&self) -> bool {
        let Some(c) = &self.certificate else { return false };
        let radius_ok = self.points.iter().all(|p| (*p - self.anchor).norm() <= self.b1 * (1.0 + CERT_SLACK));
        match regularity_scan(&self.points, c.alpha, c.b0, c.b1) {
            Ok(fresh) => radius_ok && fresh.upsilon <= c.upsilon * (1.0 + CERT_SLACK),
            Err(_) => false,
        }
    }
}
