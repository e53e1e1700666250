//! Splitting `g = h exp(w)` with `h` in `H` and `w` in `r`.

use crate::algebra::{exp_lie, log_group, LieVector};
use crate::group::{AmbientGroup, GroupElement};
use crate::matfn::{log_c, log_r, M2c};
use crate::sl2::Sl2;
use crate::LieError;
use nalgebra::{Matrix6, Vector6};

/// Default radius of the neighborhood of `I` in which the split is unique.
pub const DEFAULT_NEIGHBORHOOD: f64 = 0.5;
/// Default perturbative scale for `bch_difference` inputs.
pub const DEFAULT_BETA0: f64 = 1e-2;

const NEWTON_TOL: f64 = 1e-13;
const NEWTON_CAP: usize = 50;
const FD_STEP: f64 = 1e-7;

/// `g = h exp(w)`.
#[derive(Clone, Copy, Debug)]
pub struct Decomposition {
    pub h: GroupElement,
    pub w: Sl2,
    pub iterations: usize,
    /// Max-entry reconstruction residual `||h exp(w) - g||`.
    pub residual: f64,
}

fn residual(g: AmbientGroup, target: &GroupElement, p: &Vector6<f64>) -> Vector6<f64> {
    let wh = LieVector::from_h(Sl2::new(p[0], p[1], p[2]));
    let wr = LieVector::from_r(Sl2::new(p[3], p[4], p[5]));
    let k = exp_lie(g, &(-wr)) * exp_lie(g, &(-wh)) * *target;
    Vector6::from_column_slice(&log_group(&k).to_array())
}

fn vmax(v: &Vector6<f64>) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Damped Newton on `log(exp(-w_r) exp(-w_h) g) = 0`, started from the
/// linear split of `log g`. Unique solution for `||g - I|| <= radius`.
pub fn decompose_transversal(g: &GroupElement, radius: f64) -> Result<Decomposition, LieError> {
    let grp = g.group();
    let d = g.dist_identity();
    if d > radius {
        return Err(LieError::OutOfNeighborhood { distance: d, radius });
    }
    let mut p = Vector6::from_column_slice(&log_group(g).to_array());
    let mut f = residual(grp, g, &p);
    let mut it = 0;
    while vmax(&f) > NEWTON_TOL {
        if it == NEWTON_CAP {
            return Err(LieError::NonConvergence { iterations: it, residual: vmax(&f) });
        }
        it += 1;
        let mut jac = Matrix6::zeros();
        for k in 0..6 {
            let mut pp = p;
            let mut pm = p;
            pp[k] += FD_STEP;
            pm[k] -= FD_STEP;
            let col = (residual(grp, g, &pp) - residual(grp, g, &pm)) / (2.0 * FD_STEP);
            jac.set_column(k, &col);
        }
        let step = match jac.lu().solve(&(-f)) {
            Some(s) => s,
            None => return Err(LieError::NonConvergence { iterations: it, residual: vmax(&f) }),
        };
        let mut lam = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let q = p + step * lam;
            let fq = residual(grp, g, &q);
            if vmax(&fq) < vmax(&f) {
                p = q;
                f = fq;
                accepted = true;
                break;
            }
            lam *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if vmax(&f) > 1e-12 {
        return Err(LieError::NonConvergence { iterations: it, residual: vmax(&f) });
    }
    let h = exp_lie(grp, &LieVector::from_h(Sl2::new(p[0], p[1], p[2])));
    let w = Sl2::new(p[3], p[4], p[5]);
    let rec = h * exp_lie(grp, &LieVector::from_r(w));
    Ok(Decomposition { h, w, iterations: it, residual: rec.dist(g) })
}

/// Closed-form split for `g` near `H` (not necessarily near `I`).
///
/// `SL2(C)`: `conj(g)^-1 g = exp(2 i w)`. Product: `h = g2`, `w = log(g2^-1 g1)`.
pub fn split_near_h(g: &GroupElement) -> (GroupElement, Sl2) {
    match g {
        GroupElement::Sl2C(m) => {
            let cj = m.map(|z| z.conj());
            let q = cj.try_inverse().expect("unimodular") * m;
            let l = log_c(&q) * num_complex::Complex64::from(0.5);
            let w = Sl2::from_matrix(&l.map(|z| z.im));
            let wi = M2c::from_fn(|i, j| num_complex::Complex64::new(0.0, -w.to_matrix()[(i, j)]));
            let h = m * crate::matfn::exp_c(&wi);
            let hr = h.map(|z| z.re);
            (GroupElement::from_h(AmbientGroup::Sl2C, &hr), w)
        }
        GroupElement::Product(a, b) => {
            let bi = b.try_inverse().expect("unimodular");
            let w = Sl2::from_matrix(&log_r(&(bi * a)));
            (GroupElement::from_h(AmbientGroup::Sl2RxSl2R, b), w)
        }
    }
}

/// Output of `bch_difference`.
#[derive(Clone, Copy, Debug)]
pub struct BchDifference {
    pub h: GroupElement,
    pub w: Sl2,
    /// `max(||w1||, ||w2||)`.
    pub beta: f64,
    /// Empirical constant `||h - I|| / (beta ||w||)` (0 when `w = 0`).
    pub c_fit: f64,
    pub residual: f64,
}

/// `exp(w1) exp(-w2) = h exp(w)` for `w1, w2` in `r` of size at most `beta0`.
pub fn bch_difference(
    grp: AmbientGroup,
    w1: &Sl2,
    w2: &Sl2,
    beta0: f64,
) -> Result<BchDifference, LieError> {
    let beta = w1.norm().max(w2.norm());
    if beta > beta0 {
        return Err(LieError::OutOfNeighborhood { distance: beta, radius: beta0 });
    }
    let g = exp_lie(grp, &LieVector::from_r(*w1)) * exp_lie(grp, &LieVector::from_r(-*w2));
    let d = decompose_transversal(&g, DEFAULT_NEIGHBORHOOD)?;
    let wn = d.w.norm();
    let c_fit = if wn > 0.0 && beta > 0.0 { d.h.dist_identity() / (beta * wn) } else { 0.0 };
    Ok(BchDifference { h: d.h, w: d.w, beta, c_fit, residual: d.residual })
}
