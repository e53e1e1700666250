use crate::{ProjectionError, Result};
use horolab_lie::Sl2;
use rayon::prelude::*;

/// Default cap on the energy constant `D` accepted as the hypothesis.
pub const DEFAULT_ENERGY_CAP: f64 = 1.0e3;

/// Per-point `sum_{w' != w} ||w - w'||^-alpha`, summed in index order.
pub fn alpha_energy(f: &[Sl2], alpha: f64) -> Result<Vec<f64>> {
    f.par_iter()
        .enumerate()
        .map(|(i, w)| {
            let mut s = 0.0;
            for (j, wp) in f.iter().enumerate() {
                if j == i {
                    continue;
                }
                let d = (*w - *wp).norm();
                if d == 0.0 {
                    return Err(ProjectionError::DuplicatePoints { i: i.min(j), j: i.max(j) });
                }
                s += d.powf(-alpha);
            }
            Ok(s)
        })
        .collect()
}

/// Smallest `D` with `sum <= D (#F)^{1+eps}` at every point (at least 1).
pub fn energy_constant(f: &[Sl2], alpha: f64, eps: f64) -> Result<f64> {
    let sums = alpha_energy(f, alpha)?;
    let scale = (f.len() as f64).powf(1.0 + eps);
    Ok(sums.iter().fold(1.0f64, |d, s| d.max(s / scale)))
}
