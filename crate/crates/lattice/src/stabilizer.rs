use crate::cache::LatticeCache;
use crate::elem::Elem;
use crate::reduce::QuotientPoint;
use horolab_lie::{adjoint, GroupElement, LieVector, Sl2};
use rayon::prelude::*;
use serde::Serialize;

/// 3x3 minors of a 6x3 matrix in lexicographic row order.
fn plucker(cols: &[[f64; 6]; 3]) -> [f64; 20] {
    let mut out = [0.0; 20];
    let mut n = 0;
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                let m = |r: usize, c: usize| cols[c][r];
                let rows = [i, j, k];
                let e = |a: usize, b: usize| m(rows[a], b);
                out[n] = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                    - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                    + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
                n += 1;
            }
        }
    }
    out
}

fn h_frame(g: &GroupElement) -> [[f64; 6]; 3] {
    [Sl2::E11, Sl2::E12, Sl2::E21].map(|e| adjoint(g, &LieVector::from_h(e)).to_array())
}

/// The `wedge^3` vector `g^-1 v_H` spanning `Ad(g^-1) h`.
pub fn wedge_h(g: &GroupElement) -> [f64; 20] {
    plucker(&h_frame(&g.inv()))
}

fn norm(v: &[f64; 20]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerHit {
    pub gamma: Elem,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerReport {
    /// Hits sorted by residual (identity excluded).
    pub hits: Vec<StabilizerHit>,
    /// Two hits that do not commute modulo the center.
    pub periodic: bool,
}

/// Cached `gamma != +-e` with `||gamma . p - p|| <= tol ||p||`, `p = g^-1 v_H`
/// (up to the sign of the wedge).
pub fn near_stabilizer_search(x: &QuotientPoint, tol: f64, cache: &LatticeCache) -> StabilizerReport {
    let kind = cache.kind();
    let p = wedge_h(&x.rep);
    let pn = norm(&p);
    let base = h_frame(&x.rep.inv());
    let mut hits: Vec<StabilizerHit> = (0..cache.len())
        .into_par_iter()
        .filter_map(|i| {
            let e = cache.elems()[i];
            if e.is_identity(kind) {
                return None;
            }
            let g = cache.float(i);
            let cols = base.map(|c| adjoint(g, &LieVector::from_array(&c)).to_array());
            let q = plucker(&cols);
            let mut dm = 0.0;
            let mut dp = 0.0;
            for k in 0..20 {
                dm += (q[k] - p[k]).powi(2);
                dp += (q[k] + p[k]).powi(2);
            }
            let residual = dm.min(dp).sqrt() / pn;
            (residual <= tol).then_some(StabilizerHit { gamma: e, residual })
        })
        .collect();
    hits.sort_by(|a, b| a.residual.total_cmp(&b.residual).then(a.gamma.cmp(&b.gamma)));
    let periodic = has_noncommuting_pair(&hits, kind);
    StabilizerReport { hits, periodic }
}

fn has_noncommuting_pair(hits: &[StabilizerHit], kind: crate::LatticeKind) -> bool {
    // Quadratic in the number of hits; a few hundred at most in practice.
    let cap = hits.len().min(256);
    for i in 0..cap {
        for j in i + 1..cap {
            let (a, b) = (&hits[i].gamma, &hits[j].gamma);
            match (a.mul(b, kind), b.mul(a, kind)) {
                (Some(ab), Some(ba)) if ab != ba => return true,
                _ => {}
            }
        }
    }
    false
}
