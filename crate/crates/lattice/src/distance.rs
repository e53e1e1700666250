use crate::cache::LatticeCache;
use crate::reduce::{act_h2, act_h3, dist_h2, dist_h3, H3Point};
use crate::reduce::QuotientPoint;
use crate::LatticeError;
use horolab_lie::{GroupElement, C64};
use rayon::prelude::*;

/// Base points in `H^3` used by the frame distance.
const BASE_H3: [H3Point; 3] = [
    H3Point { z: C64 { re: 0.0, im: 0.0 }, h: 1.0 },
    H3Point { z: C64 { re: 0.5, im: 0.0 }, h: 1.0 },
    H3Point { z: C64 { re: 0.0, im: 0.5 }, h: 1.0 },
];

/// Base points in `H^2` (per factor).
const BASE_H2: [C64; 3] = [C64 { re: 0.0, im: 1.0 }, C64 { re: 1.0, im: 1.0 }, C64 { re: -1.0, im: 2.0 }];

#[derive(Clone, Copy)]
enum Frame {
    H3([H3Point; 3]),
    H2x2([C64; 3], [C64; 3]),
}

fn frame(g: &GroupElement) -> Frame {
    match g {
        GroupElement::Sl2C(m) => {
            let t = m.transpose();
            Frame::H3(BASE_H3.map(|p| act_h3(&t, &p)))
        }
        GroupElement::Product(a, b) => {
            let (ta, tb) = (a.transpose(), b.transpose());
            Frame::H2x2(BASE_H2.map(|p| act_h2(&ta, p)), BASE_H2.map(|p| act_h2(&tb, p)))
        }
    }
}

fn moved(f: &Frame, gamma: &GroupElement) -> Frame {
    match (f, gamma) {
        (Frame::H3(ps), GroupElement::Sl2C(m)) => {
            let t = m.transpose();
            Frame::H3(ps.map(|p| act_h3(&t, &p)))
        }
        (Frame::H2x2(p1, p2), GroupElement::Product(a, b)) => {
            let (ta, tb) = (a.transpose(), b.transpose());
            Frame::H2x2(p1.map(|p| act_h2(&ta, p)), p2.map(|p| act_h2(&tb, p)))
        }
        _ => panic!("mixed ambient groups"),
    }
}

fn frame_dist(a: &Frame, b: &Frame) -> f64 {
    match (a, b) {
        (Frame::H3(p), Frame::H3(q)) => (0..3).map(|i| dist_h3(&p[i], &q[i])).sum(),
        (Frame::H2x2(p1, p2), Frame::H2x2(q1, q2)) => {
            (0..3).map(|i| dist_h2(p1[i], q1[i]) + dist_h2(p2[i], q2[i])).sum()
        }
        _ => panic!("mixed ambient groups"),
    }
}

/// Right-invariant frame distance `D(g, h) = sum_i d(g^T p_i, h^T p_i)`.
pub fn frame_distance(g: &GroupElement, h: &GroupElement) -> f64 {
    frame_dist(&frame(g), &frame(h))
}

/// `d_X(x, y) = min_gamma D(g, h gamma)` over the cache, with the minimizer index.
pub fn distance_with_arg(x: &QuotientPoint, y: &QuotientPoint, cache: &LatticeCache) -> (f64, usize) {
    assert_eq!(x.lattice, y.lattice, "points on different quotients");
    let fx = frame(&x.rep);
    let fy = frame(&y.rep);
    (0..cache.len())
        .into_par_iter()
        .map(|i| (frame_dist(&fx, &moved(&fy, cache.float(i))), i))
        .reduce(|| (f64::INFINITY, usize::MAX), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
}

/// Distance on the quotient, flagged `CacheTooSmall` when the minimizer lies
/// on the cache shell.
pub fn distance_x(x: &QuotientPoint, y: &QuotientPoint, cache: &LatticeCache) -> Result<f64, LatticeError> {
    let (value, i) = distance_with_arg(x, y, cache);
    if cache.in_shell(i) {
        Err(LatticeError::CacheTooSmall { value })
    } else {
        Ok(value)
    }
}

pub fn distance_value(x: &QuotientPoint, y: &QuotientPoint, cache: &LatticeCache) -> f64 {
    distance_with_arg(x, y, cache).0
}

/// First summand of the frame distance; a lower bound for the whole.
fn leading_term(a: &Frame, b: &Frame) -> f64 {
    match (a, b) {
        (Frame::H3(p), Frame::H3(q)) => dist_h3(&p[0], &q[0]),
        (Frame::H2x2(p1, p2), Frame::H2x2(q1, q2)) => dist_h2(p1[0], q1[0]) + dist_h2(p2[0], q2[0]),
        _ => panic!("mixed ambient groups"),
    }
}

/// The frames of `y gamma` for every cached `gamma`, for repeated distance
/// queries against a fixed point.
#[derive(Clone)]
pub struct OrbitFrames {
    lattice: crate::LatticeKind,
    frames: Vec<Frame>,
}

impl OrbitFrames {
    pub fn new(y: &QuotientPoint, cache: &LatticeCache) -> Self {
        let fy = frame(&y.rep);
        let frames = (0..cache.len()).map(|i| moved(&fy, cache.float(i))).collect();
        OrbitFrames { lattice: y.lattice, frames }
    }

    /// Same value as [`distance_value`], sequential.
    pub fn distance(&self, x: &QuotientPoint) -> f64 {
        self.distance_within(x, f64::INFINITY).unwrap_or(f64::INFINITY)
    }

    /// `d_X(x, y)` when it is at most `radius`.
    pub fn distance_within(&self, x: &QuotientPoint, radius: f64) -> Option<f64> {
        assert_eq!(x.lattice, self.lattice, "points on different quotients");
        let fx = frame(&x.rep);
        let mut best = radius;
        let mut hit = false;
        for f in &self.frames {
            if leading_term(&fx, f) > best {
                continue;
            }
            let d = frame_dist(&fx, f);
            if d <= best {
                best = d;
                hit = true;
            }
        }
        hit.then_some(best)
    }
}
