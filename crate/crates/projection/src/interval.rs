//! Regularity of finitely supported measures on the line.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalRegularity {
    pub exponent: f64,
    pub floor: f64,
    /// `max rho(J) / |J|^exponent` over the scanned intervals.
    pub constant: f64,
    pub worst: (f64, f64),
    pub worst_mass: f64,
    pub intervals: usize,
}

/// Scans the dyadic intervals `[k 2^-j, (k+1) 2^-j)` and their half-shifts,
/// for every length from twice the support span down to the last one not
/// below `floor`. An interval of length `floor <= l <= span` lies inside a
/// scanned interval of length at most `4l`.
pub fn interval_regularity(support: &[f64], weights: &[f64], exponent: f64, floor: f64) -> IntervalRegularity {
    assert_eq!(support.len(), weights.len());
    assert!(floor > 0.0, "floor must be positive");
    let mut out = IntervalRegularity {
        exponent,
        floor,
        constant: 0.0,
        worst: (0.0, 0.0),
        worst_mass: 0.0,
        intervals: 0,
    };
    if support.is_empty() {
        return out;
    }
    let (lo, hi) = support.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |m, &s| (m.0.min(s), m.1.max(s)));
    let span = (hi - lo).max(floor);
    let j_top = (-span.log2()).floor() as i32 - 1;
    let j_bot = (-floor.log2()).floor() as i32;
    let mut cells: Vec<(i64, f64)> = Vec::with_capacity(support.len());
    for j in j_top..=j_bot {
        let len = 2f64.powi(-j);
        let norm = len.powf(exponent);
        for shift in [0.0, 0.5 * len] {
            cells.clear();
            cells.extend(support.iter().zip(weights).map(|(&s, &w)| (((s - shift) / len).floor() as i64, w)));
            cells.sort_by(|a, b| a.0.cmp(&b.0));
            let mut i = 0;
            while i < cells.len() {
                let k = cells[i].0;
                let mut mass = 0.0;
                while i < cells.len() && cells[i].0 == k {
                    mass += cells[i].1;
                    i += 1;
                }
                out.intervals += 1;
                let c = mass / norm;
                if c > out.constant {
                    let a = shift + k as f64 * len;
                    out.constant = c;
                    out.worst = (a, a + len);
                    out.worst_mass = mass;
                }
            }
        }
    }
    out
}
