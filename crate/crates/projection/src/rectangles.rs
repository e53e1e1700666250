//! Diagnostic count of incomparable `(delta, t)`-rectangles.
//!
//! A `(delta, t)`-rectangle is the `delta`-neighborhood of a piece of some
//! `Xi(w)` of length `sqrt(delta / t)`. This module only counts them for a
//! bipartite pair of sets; it plays no part in any verification.

use crate::geometry::xi;
use horolab_lie::Sl2;
use serde::{Deserialize, Serialize};

/// Comparability constant `C_hat`.
pub const DEFAULT_C_HAT: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Rect {
    w: Sl2,
    lo: f64,
    hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectangleCount {
    pub candidates: usize,
    /// Greedy maximal family of pairwise incomparable rectangles of type `(>= mu, >= nu)`.
    pub incomparable: usize,
    /// `(rho(W) rho(B) / (mu nu))^{3/4} + rho(W) / mu + rho(B) / nu`.
    pub incidence_bound: f64,
}

/// `sup_{q in [lo, hi]} |xi_q(w) - xi_q(v)|`; the difference is a quadratic in `q`.
fn sup_gap(w: &Sl2, v: &Sl2, lo: f64, hi: f64) -> f64 {
    let d = *w - *v;
    let mut m = xi(&d, lo).abs().max(xi(&d, hi).abs());
    if d.c != 0.0 {
        let vertex = -d.a / d.c;
        if vertex > lo && vertex < hi {
            m = m.max(xi(&d, vertex).abs());
        }
    }
    m
}

/// `Xi(v)` is `C_hat`-tangent to `r` when `Xi^{C_hat delta}(v)` contains it.
fn tangent(r: &Rect, v: &Sl2, delta: f64, c_hat: f64) -> bool {
    sup_gap(&r.w, v, r.lo, r.hi) + delta <= c_hat * delta
}

/// Sufficient test: both fit in the `C_hat delta` rectangle around the first
/// one's parabola over the union of their ranges.
fn comparable(a: &Rect, b: &Rect, delta: f64, t: f64, c_hat: f64) -> bool {
    let lo = a.lo.min(b.lo);
    let hi = a.hi.max(b.hi);
    hi - lo <= (c_hat * delta / t).sqrt() && sup_gap(&a.w, &b.w, lo, hi) + delta <= c_hat * delta
}

/// Counts with the uniform measure of mass `1 / total` per point.
#[allow(clippy::too_many_arguments)]
pub fn incomparable_rectangles(
    white: &[Sl2],
    black: &[Sl2],
    total: usize,
    delta: f64,
    t: f64,
    mu: f64,
    nu: f64,
    c_hat: f64,
) -> RectangleCount {
    assert!(0.0 < delta && delta <= t && t <= 1.0, "need 0 < delta <= t <= 1");
    let len = (delta / t).sqrt().min(1.0);
    let mass = 1.0 / total as f64;
    let starts: Vec<f64> = {
        let step = 0.5 * len;
        let k = ((1.0 - len) / step).floor() as usize;
        (0..=k).map(|i| i as f64 * step).collect()
    };
    let mut chosen: Vec<Rect> = Vec::new();
    let mut candidates = 0;
    for w in white.iter().chain(black) {
        for &s in &starts {
            candidates += 1;
            let r = Rect { w: *w, lo: s, hi: s + len };
            let mw = white.iter().filter(|v| tangent(&r, v, delta, c_hat)).count() as f64 * mass;
            let mb = black.iter().filter(|v| tangent(&r, v, delta, c_hat)).count() as f64 * mass;
            if mw < mu || mb < nu {
                continue;
            }
            if chosen.iter().all(|c| !comparable(c, &r, delta, t, c_hat) && !comparable(&r, c, delta, t, c_hat)) {
                chosen.push(r);
            }
        }
    }
    let rw = white.len() as f64 * mass;
    let rb = black.len() as f64 * mass;
    RectangleCount {
        candidates,
        incomparable: chosen.len(),
        incidence_bound: (rw * rb / (mu * nu)).powf(0.75) + rw / mu + rb / nu,
    }
}
