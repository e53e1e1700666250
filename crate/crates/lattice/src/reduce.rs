//! Fundamental-domain reduction.
//!
//! The symmetric-space point of a representative `g` is `g^T . o` with
//! `o = (0, 1)` in upper half-space (or `i` per factor). Reducing that point
//! by `delta` on the left changes the representative to `g delta^T`.

use crate::elem::{s_elem, translation, Elem, LatticeKind};
use horolab_lie::{GroupElement, C64};
use nalgebra::Matrix2;
use serde::Serialize;

/// Iteration budget for the reduction loops.
pub const REDUCTION_CAP: usize = 10_000;

/// Slack on the domain inequalities so that boundary points do not cycle.
const DOMAIN_TOL: f64 = 1e-12;

/// Point of `H^3` as `(z, h)`, `h > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct H3Point {
    pub z: C64,
    pub h: f64,
}

/// Point of the symmetric space attached to a representative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SymPoint {
    H3(H3Point),
    H2xH2(C64, C64),
}

/// Action of `[[a, b], [c, d]]` in `SL2(C)` on upper half-space.
pub fn act_h3(m: &Matrix2<C64>, p: &H3Point) -> H3Point {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let czd = c * p.z + d;
    let den = czd.norm_sqr() + c.norm_sqr() * p.h * p.h;
    let z = ((a * p.z + b) * czd.conj() + a * c.conj() * p.h * p.h) / den;
    H3Point { z, h: p.h / den }
}

/// Moebius action on the upper half-plane.
pub fn act_h2(m: &Matrix2<f64>, z: C64) -> C64 {
    (z * m[(0, 0)] + m[(0, 1)]) / (z * m[(1, 0)] + m[(1, 1)])
}

/// Hyperbolic distance in `H^3`.
pub fn dist_h3(p: &H3Point, q: &H3Point) -> f64 {
    let num = (p.z - q.z).norm_sqr() + (p.h - q.h).powi(2);
    2.0 * (num.sqrt() / (2.0 * (p.h * q.h).sqrt())).asinh()
}

/// Hyperbolic distance in `H^2`.
pub fn dist_h2(p: C64, q: C64) -> f64 {
    2.0 * ((p - q).norm() / (2.0 * (p.im * q.im).sqrt())).asinh()
}

pub const ORIGIN_H3: H3Point = H3Point { z: C64 { re: 0.0, im: 0.0 }, h: 1.0 };
pub const ORIGIN_H2: C64 = C64 { re: 0.0, im: 1.0 };

/// `g^T` applied to an arbitrary base point (per factor for the product).
pub fn transpose_image(g: &GroupElement, p3: &H3Point, p2: C64) -> SymPoint {
    match g {
        GroupElement::Sl2C(m) => SymPoint::H3(act_h3(&m.transpose(), p3)),
        GroupElement::Product(a, b) => SymPoint::H2xH2(act_h2(&a.transpose(), p2), act_h2(&b.transpose(), p2)),
    }
}

pub fn sym_point(g: &GroupElement) -> SymPoint {
    transpose_image(g, &ORIGIN_H3, ORIGIN_H2)
}

/// Height of a symmetric-space point: `h` in `H^3`; for the reducible product
/// the larger imaginary part; for the irreducible lattice the geometric mean.
pub fn height(p: &SymPoint, kind: LatticeKind) -> f64 {
    match (p, kind) {
        (SymPoint::H3(q), _) => q.h,
        (SymPoint::H2xH2(a, b), LatticeKind::ZSqrt2) => (a.im * b.im).sqrt(),
        (SymPoint::H2xH2(a, b), _) => a.im.max(b.im),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionStatus {
    /// The point satisfies the documented domain inequalities.
    Reduced,
    /// Heuristic reduction (irreducible lattice); no domain guarantee.
    BestEffort,
    /// The loop hit `REDUCTION_CAP`; the representative is unreduced.
    IterationCap,
}

/// A coset `g Gamma` with its chosen representative.
#[derive(Clone, Copy, Debug)]
pub struct QuotientPoint {
    pub rep: GroupElement,
    pub lattice: LatticeKind,
    pub reduced: bool,
    pub status: ReductionStatus,
    /// `delta` with `rep = g delta^T` (exact, modulo the center).
    pub delta: Elem,
    pub iterations: usize,
    /// Largest violation of the domain inequalities (0 when reduced exactly).
    pub reduction_quality: f64,
    pub height: f64,
}

impl QuotientPoint {
    /// Wraps a representative without reducing it.
    pub fn unreduced(g: GroupElement, kind: LatticeKind) -> Self {
        let height = height(&sym_point(&g), kind);
        QuotientPoint {
            rep: g,
            lattice: kind,
            reduced: false,
            status: ReductionStatus::BestEffort,
            delta: Elem::identity(kind),
            iterations: 0,
            reduction_quality: f64::NAN,
            height,
        }
    }

    pub fn sym(&self) -> SymPoint {
        sym_point(&self.rep)
    }
}

/// Reduce `g` so that its symmetric-space point lies in the standard
/// fundamental domain (Picard domain for `SL2(Z[i])`, modular domain per factor
/// for `SL2(Z)^2`, heuristic for `SL2(Z[sqrt 2])`).
pub fn reduce_point(g: &GroupElement, kind: LatticeKind) -> QuotientPoint {
    let (delta, iterations, capped) = match (kind, sym_point(g)) {
        (LatticeKind::GaussianIntegers, SymPoint::H3(p)) => reduce_picard(p),
        (LatticeKind::ZxZ, SymPoint::H2xH2(z1, z2)) => reduce_modular_pair(z1, z2),
        (LatticeKind::ZSqrt2, SymPoint::H2xH2(z1, z2)) => reduce_hilbert(z1, z2),
        _ => panic!("representative does not match lattice {kind}"),
    };
    let rep = g * &delta.transpose(kind).to_group(kind);
    let sp = sym_point(&rep);
    let quality = domain_violation(&sp, kind);
    let status = if capped {
        ReductionStatus::IterationCap
    } else if kind == LatticeKind::ZSqrt2 {
        ReductionStatus::BestEffort
    } else {
        ReductionStatus::Reduced
    };
    QuotientPoint {
        rep,
        lattice: kind,
        reduced: status == ReductionStatus::Reduced,
        status,
        delta,
        iterations,
        reduction_quality: quality,
        height: height(&sp, kind),
    }
}

/// Largest amount by which a point violates the domain inequalities.
pub fn domain_violation(p: &SymPoint, kind: LatticeKind) -> f64 {
    let modular = |z: C64| (z.re.abs() - 0.5).max(1.0 - z.norm()).max(0.0);
    match (p, kind) {
        (SymPoint::H3(q), _) => {
            let v = (q.z.re.abs() - 0.5)
                .max(q.z.im - 0.5)
                .max(-q.z.im)
                .max(1.0 - (q.z.norm_sqr() + q.h * q.h).sqrt());
            v.max(0.0)
        }
        (SymPoint::H2xH2(a, b), LatticeKind::ZxZ) => modular(*a).max(modular(*b)),
        // No exact domain for the irreducible lattice; report the height-product defect.
        (SymPoint::H2xH2(a, b), _) => (1.0 - a.norm() * b.norm()).max(0.0),
    }
}

fn nearest(x: f64) -> i64 {
    if x.abs() <= 0.5 + DOMAIN_TOL {
        0
    } else {
        x.round() as i64
    }
}

fn compose(kind: LatticeKind, step: &Elem, acc: &Elem) -> Elem {
    step.mul(acc, kind).expect("reduction word overflowed i64")
}

fn reduce_picard(mut p: H3Point) -> (Elem, usize, bool) {
    let kind = LatticeKind::GaussianIntegers;
    let s = s_elem(kind);
    let l = Elem([0, 1, 0, 0, 0, 0, 0, -1]);
    let mut acc = Elem::identity(kind);
    for it in 0..REDUCTION_CAP {
        let (n, m) = (nearest(p.z.re), nearest(p.z.im));
        if n != 0 || m != 0 {
            p.z -= C64::new(n as f64, m as f64);
            acc = compose(kind, &translation(kind, -n, -m), &acc);
        }
        if p.z.im < -DOMAIN_TOL {
            p.z = -p.z;
            acc = compose(kind, &l, &acc);
        }
        let r2 = p.z.norm_sqr() + p.h * p.h;
        if r2 < 1.0 - DOMAIN_TOL {
            p = H3Point { z: -p.z.conj() / r2, h: p.h / r2 };
            acc = compose(kind, &s, &acc);
        } else {
            return (acc, it + 1, false);
        }
    }
    (acc, REDUCTION_CAP, true)
}

fn reduce_modular(mut z: C64, block: usize) -> (Elem, usize, bool) {
    let kind = LatticeKind::ZxZ;
    let put = |m: [i64; 4]| {
        let mut c = [1, 0, 0, 1, 1, 0, 0, 1];
        c[4 * block..4 * block + 4].copy_from_slice(&m);
        Elem(c).normalized(kind)
    };
    let mut acc = Elem::identity(kind);
    for it in 0..REDUCTION_CAP {
        let n = nearest(z.re);
        if n != 0 {
            z -= n as f64;
            acc = compose(kind, &put([1, -n, 0, 1]), &acc);
        }
        let r2 = z.norm_sqr();
        if r2 < 1.0 - DOMAIN_TOL {
            z = -z.conj() / r2;
            acc = compose(kind, &put([0, -1, 1, 0]), &acc);
        } else {
            return (acc, it + 1, false);
        }
    }
    (acc, REDUCTION_CAP, true)
}

fn reduce_modular_pair(z1: C64, z2: C64) -> (Elem, usize, bool) {
    let kind = LatticeKind::ZxZ;
    let (d1, i1, c1) = reduce_modular(z1, 0);
    let (d2, i2, c2) = reduce_modular(z2, 1);
    (d1.mul(&d2, kind).expect("overflow"), i1 + i2, c1 || c2)
}

fn reduce_hilbert(mut z1: C64, mut z2: C64) -> (Elem, usize, bool) {
    let kind = LatticeKind::ZSqrt2;
    let sqrt2 = std::f64::consts::SQRT_2;
    let eps = 1.0 + sqrt2;
    let s = s_elem(kind);
    let mut acc = Elem::identity(kind);
    for it in 0..REDUCTION_CAP {
        // Balance the two heights with a power of the unit diag(eps, eps^-1).
        let k = ((z2.im / z1.im).ln() / (4.0 * eps.ln())).round() as i64;
        if k != 0 {
            let f = eps.powi(2 * k as i32);
            z1 *= f;
            z2 /= f;
            let (u, uinv) = (Elem([1, 1, 0, 0, 0, 0, -1, 1]), Elem([-1, 1, 0, 0, 0, 0, 1, 1]));
            let step = if k > 0 { u } else { uinv.normalized(kind) };
            for _ in 0..k.unsigned_abs() {
                acc = compose(kind, &step, &acc);
            }
        }
        // Translate by the nearest point of Z[sqrt 2] embedded in R^2; the
        // basis (1, 1), (sqrt 2, -sqrt 2) is orthogonal so rounding is exact.
        let x = ((z1.re + z2.re) / 2.0).round() as i64;
        let y = ((z1.re - z2.re) / (2.0 * sqrt2)).round() as i64;
        if x != 0 || y != 0 {
            z1 -= x as f64 + y as f64 * sqrt2;
            z2 -= x as f64 - y as f64 * sqrt2;
            acc = compose(kind, &translation(kind, -x, -y), &acc);
        }
        let prod = z1.norm() * z2.norm();
        if prod < 1.0 - DOMAIN_TOL {
            z1 = -z1.conj() / z1.norm_sqr();
            z2 = -z2.conj() / z2.norm_sqr();
            acc = compose(kind, &s, &acc);
        } else {
            return (acc, it + 1, false);
        }
    }
    (acc, REDUCTION_CAP, true)
}
