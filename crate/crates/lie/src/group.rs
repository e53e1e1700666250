use crate::matfn::{M2c, M2r};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::ops::Mul;

/// Which ambient group an experiment lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AmbientGroup {
    Sl2C,
    Sl2RxSl2R,
}

/// Element of `SL2(C)` or `SL2(R) x SL2(R)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GroupElement {
    Sl2C(M2c),
    Product(M2r, M2r),
}

fn cmax(m: &M2c) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

fn rmax(m: &M2r) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.abs()))
}

fn inv2c(m: &M2c) -> M2c {
    let det = m.determinant();
    M2c::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det
}

fn inv2r(m: &M2r) -> M2r {
    let det = m.determinant();
    M2r::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det
}

pub(crate) fn to_c(m: &M2r) -> M2c {
    m.map(|v| C64::new(v, 0.0))
}

impl GroupElement {
    pub fn identity(g: AmbientGroup) -> Self {
        match g {
            AmbientGroup::Sl2C => GroupElement::Sl2C(M2c::identity()),
            AmbientGroup::Sl2RxSl2R => GroupElement::Product(M2r::identity(), M2r::identity()),
        }
    }

    pub fn group(&self) -> AmbientGroup {
        match self {
            GroupElement::Sl2C(_) => AmbientGroup::Sl2C,
            GroupElement::Product(..) => AmbientGroup::Sl2RxSl2R,
        }
    }

    /// Embedding of a real `SL2(R)` matrix into `H`.
    pub fn from_h(g: AmbientGroup, m: &M2r) -> Self {
        match g {
            AmbientGroup::Sl2C => GroupElement::Sl2C(to_c(m)),
            AmbientGroup::Sl2RxSl2R => GroupElement::Product(*m, *m),
        }
    }

    /// The real matrix when the element lies in `H` up to `tol`.
    pub fn h_part(&self, tol: f64) -> Option<M2r> {
        match self {
            GroupElement::Sl2C(m) => {
                if m.iter().all(|z| z.im.abs() <= tol) {
                    Some(m.map(|z| z.re))
                } else {
                    None
                }
            }
            GroupElement::Product(a, b) => {
                if rmax(&(a - b)) <= tol {
                    Some(*b)
                } else {
                    None
                }
            }
        }
    }

    /// Inverse via the adjugate (exact for unit determinant).
    pub fn inv(&self) -> Self {
        match self {
            GroupElement::Sl2C(m) => GroupElement::Sl2C(inv2c(m)),
            GroupElement::Product(a, b) => GroupElement::Product(inv2r(a), inv2r(b)),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            GroupElement::Sl2C(m) => GroupElement::Sl2C(-m),
            GroupElement::Product(a, b) => GroupElement::Product(-a, -b),
        }
    }

    /// Largest `|det - 1|` over the factors.
    pub fn det_error(&self) -> f64 {
        match self {
            GroupElement::Sl2C(m) => (m.determinant() - C64::from(1.0)).norm(),
            GroupElement::Product(a, b) => {
                (a.determinant() - 1.0).abs().max((b.determinant() - 1.0).abs())
            }
        }
    }

    /// Max-entry distance between two elements of the same group.
    pub fn dist(&self, o: &Self) -> f64 {
        match (self, o) {
            (GroupElement::Sl2C(a), GroupElement::Sl2C(b)) => cmax(&(a - b)),
            (GroupElement::Product(a1, a2), GroupElement::Product(b1, b2)) => {
                rmax(&(a1 - b1)).max(rmax(&(a2 - b2)))
            }
            _ => panic!("mixed ambient groups"),
        }
    }

    /// `||g - I||` in the max-entry norm.
    pub fn dist_identity(&self) -> f64 {
        self.dist(&GroupElement::identity(self.group()))
    }

    /// Per-factor distance to `{I, -I}`, maximized over factors.
    pub fn dist_center(&self) -> f64 {
        match self {
            GroupElement::Sl2C(m) => {
                let id = M2c::identity();
                cmax(&(m - id)).min(cmax(&(m + id)))
            }
            GroupElement::Product(a, b) => {
                let id = M2r::identity();
                let da = rmax(&(a - id)).min(rmax(&(a + id)));
                let db = rmax(&(b - id)).min(rmax(&(b + id)));
                da.max(db)
            }
        }
    }

    /// Largest entry modulus.
    pub fn max_entry(&self) -> f64 {
        match self {
            GroupElement::Sl2C(m) => cmax(m),
            GroupElement::Product(a, b) => rmax(a).max(rmax(b)),
        }
    }

    /// Factors as complex matrices (one for `SL2(C)`, two for the product).
    pub fn factors(&self) -> Vec<M2c> {
        match self {
            GroupElement::Sl2C(m) => vec![*m],
            GroupElement::Product(a, b) => vec![to_c(a), to_c(b)],
        }
    }

    pub fn transpose(&self) -> Self {
        match self {
            GroupElement::Sl2C(m) => GroupElement::Sl2C(m.transpose()),
            GroupElement::Product(a, b) => GroupElement::Product(a.transpose(), b.transpose()),
        }
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, o: GroupElement) -> GroupElement {
        match (self, o) {
            (GroupElement::Sl2C(a), GroupElement::Sl2C(b)) => GroupElement::Sl2C(a * b),
            (GroupElement::Product(a1, a2), GroupElement::Product(b1, b2)) => {
                GroupElement::Product(a1 * b1, a2 * b2)
            }
            _ => panic!("mixed ambient groups"),
        }
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;
    fn mul(self, o: &GroupElement) -> GroupElement {
        *self * *o
    }
}

/// `a_t = diag(e^{t/2}, e^{-t/2})` in `H`.
pub fn a_elem(g: AmbientGroup, t: f64) -> GroupElement {
    GroupElement::from_h(g, &M2r::new((0.5 * t).exp(), 0.0, 0.0, (-0.5 * t).exp()))
}

/// `u_r = n(r, 0)`, upper unipotent in `H`.
pub fn u_elem(g: AmbientGroup, r: f64) -> GroupElement {
    GroupElement::from_h(g, &M2r::new(1.0, r, 0.0, 1.0))
}

/// Lower unipotent `u^-_s` in `H`.
pub fn u_minus(g: AmbientGroup, s: f64) -> GroupElement {
    GroupElement::from_h(g, &M2r::new(1.0, 0.0, s, 1.0))
}

/// `v_s = n(0, s)`, the unipotent direction transverse to `H`.
pub fn v_elem(g: AmbientGroup, s: f64) -> GroupElement {
    n_elem(g, 0.0, s)
}

/// `n(r, s)`: `[[1, r + is], [0, 1]]` in `SL2(C)`;
/// `([[1, r + s], [0, 1]], [[1, r], [0, 1]])` in the product.
pub fn n_elem(g: AmbientGroup, r: f64, s: f64) -> GroupElement {
    match g {
        AmbientGroup::Sl2C => GroupElement::Sl2C(M2c::new(
            C64::from(1.0),
            C64::new(r, s),
            C64::from(0.0),
            C64::from(1.0),
        )),
        AmbientGroup::Sl2RxSl2R => GroupElement::Product(
            M2r::new(1.0, r + s, 0.0, 1.0),
            M2r::new(1.0, r, 0.0, 1.0),
        ),
    }
}
