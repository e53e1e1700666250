//! The random walk `nu`: law of `a_m u_r`, `r` uniform in `[0, 1]`.

use crate::contraction::check_alpha;
use crate::MargulisError;
use horolab_lie::M2r;
use horolab_mc::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomWalk {
    pub alpha: f64,
    /// Step time `m`.
    pub m: f64,
    /// Convolution depth.
    pub ell: usize,
}

/// One draw from `nu^(ell)` with its partial products.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkDraw {
    /// `r_1, ..., r_ell`, with `r_1` applied first.
    pub r: Vec<f64>,
    /// `r_hat[j - 1] = sum_{i < j} e^{-i m} r_{i+1}`: the draw truncated to `j` steps
    /// is `a_{j m} u_{r_hat[j - 1]}`.
    pub r_hat: Vec<f64>,
}

pub fn a_mat(t: f64) -> M2r {
    M2r::new((0.5 * t).exp(), 0.0, 0.0, (-0.5 * t).exp())
}

pub fn u_mat(r: f64) -> M2r {
    M2r::new(1.0, r, 0.0, 1.0)
}

impl RandomWalk {
    pub fn new(alpha: f64, m: f64, ell: usize) -> Result<Self, MargulisError> {
        check_alpha(alpha, 0.0)?;
        if !(m > 0.0 && m.is_finite()) {
            return Err(MargulisError::InvalidWalk(format!("step time {m}")));
        }
        Ok(RandomWalk { alpha, m, ell })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> WalkDraw {
        let r: Vec<f64> = (0..self.ell).map(|_| rng.gen::<f64>()).collect();
        let mut r_hat = Vec::with_capacity(self.ell);
        let mut acc = 0.0;
        for (i, ri) in r.iter().enumerate() {
            acc += (-(i as f64) * self.m).exp() * ri;
            r_hat.push(acc);
        }
        WalkDraw { r, r_hat }
    }

    /// `a_{j m} u_{r_hat}`.
    pub fn element(&self, j: usize, r_hat: f64) -> M2r {
        a_mat(j as f64 * self.m) * u_mat(r_hat)
    }

    /// The literal product `a_m u_{r_ell} ... a_m u_{r_1}`.
    pub fn product(&self, r: &[f64]) -> M2r {
        r.iter().fold(M2r::identity(), |acc, &ri| a_mat(self.m) * u_mat(ri) * acc)
    }
}
