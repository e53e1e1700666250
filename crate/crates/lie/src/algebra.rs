use crate::group::{AmbientGroup, GroupElement};
use crate::matfn::{exp_c, exp_r, log_c, log_r, M2c, M2r};
use crate::sl2::Sl2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// Element of `g = h + r`, each part a traceless real 2x2 matrix.
///
/// As a matrix: `h + i r` in `sl2(C)`; `(h + r, h)` in `sl2(R) + sl2(R)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LieVector {
    pub h: Sl2,
    pub r: Sl2,
}

impl LieVector {
    pub const ZERO: LieVector = LieVector { h: Sl2::ZERO, r: Sl2::ZERO };

    pub fn new(h: Sl2, r: Sl2) -> Self {
        LieVector { h, r }
    }

    pub fn from_r(r: Sl2) -> Self {
        LieVector { h: Sl2::ZERO, r }
    }

    pub fn from_h(h: Sl2) -> Self {
        LieVector { h, r: Sl2::ZERO }
    }

    /// Max of the two part norms.
    pub fn norm(&self) -> f64 {
        self.h.norm().max(self.r.norm())
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.h.a, self.h.b, self.h.c, self.r.a, self.r.b, self.r.c]
    }

    pub fn from_array(v: &[f64]) -> Self {
        LieVector { h: Sl2::new(v[0], v[1], v[2]), r: Sl2::new(v[3], v[4], v[5]) }
    }
}

impl Add for LieVector {
    type Output = LieVector;
    fn add(self, o: LieVector) -> LieVector {
        LieVector { h: self.h + o.h, r: self.r + o.r }
    }
}

impl Sub for LieVector {
    type Output = LieVector;
    fn sub(self, o: LieVector) -> LieVector {
        LieVector { h: self.h - o.h, r: self.r - o.r }
    }
}

impl Neg for LieVector {
    type Output = LieVector;
    fn neg(self) -> LieVector {
        LieVector { h: -self.h, r: -self.r }
    }
}

impl Mul<f64> for LieVector {
    type Output = LieVector;
    fn mul(self, s: f64) -> LieVector {
        LieVector { h: self.h * s, r: self.r * s }
    }
}

pub(crate) enum AlgMat {
    C(M2c),
    P(M2r, M2r),
}

pub(crate) fn to_mat(g: AmbientGroup, w: &LieVector) -> AlgMat {
    match g {
        AmbientGroup::Sl2C => {
            let h = w.h.to_matrix();
            let r = w.r.to_matrix();
            AlgMat::C(M2c::from_fn(|i, j| C64::new(h[(i, j)], r[(i, j)])))
        }
        AmbientGroup::Sl2RxSl2R => {
            let h = w.h.to_matrix();
            AlgMat::P(h + w.r.to_matrix(), h)
        }
    }
}

pub(crate) fn from_mat(m: &AlgMat) -> LieVector {
    match m {
        AlgMat::C(x) => LieVector {
            h: Sl2::from_matrix(&x.map(|z| z.re)),
            r: Sl2::from_matrix(&x.map(|z| z.im)),
        },
        AlgMat::P(x1, x2) => LieVector { h: Sl2::from_matrix(x2), r: Sl2::from_matrix(&(x1 - x2)) },
    }
}

/// `Ad(g) w = g w g^-1`, factorwise.
pub fn adjoint(g: &GroupElement, w: &LieVector) -> LieVector {
    let gi = g.inv();
    let m = match (to_mat(g.group(), w), g, gi) {
        (AlgMat::C(x), GroupElement::Sl2C(a), GroupElement::Sl2C(ai)) => AlgMat::C(a * x * ai),
        (AlgMat::P(x1, x2), GroupElement::Product(a, b), GroupElement::Product(ai, bi)) => {
            AlgMat::P(a * x1 * ai, b * x2 * bi)
        }
        _ => unreachable!(),
    };
    from_mat(&m)
}

pub fn exp_lie(g: AmbientGroup, w: &LieVector) -> GroupElement {
    match to_mat(g, w) {
        AlgMat::C(x) => GroupElement::Sl2C(exp_c(&x)),
        AlgMat::P(x1, x2) => GroupElement::Product(exp_r(&x1), exp_r(&x2)),
    }
}

/// Principal logarithm; meaningful near the identity.
pub fn log_group(g: &GroupElement) -> LieVector {
    match g {
        GroupElement::Sl2C(m) => from_mat(&AlgMat::C(log_c(m))),
        GroupElement::Product(a, b) => from_mat(&AlgMat::P(log_r(a), log_r(b))),
    }
}

/// `xi_r(w) = (Ad(u_r) w)_12 = -w21 r^2 - 2 w11 r + w12`.
pub fn xi(w: &Sl2, r: f64) -> f64 {
    -w.c * r * r - 2.0 * w.a * r + w.b
}

