//! Exact lattice elements.
//!
//! Every element is eight integers. For `SL2(Z[i])` the entries `a, b, c, d`
//! are stored as `(re, im)` pairs; for `SL2(Z[sqrt 2])` as `(x, y)` meaning
//! `x + y sqrt 2`; for `SL2(Z) x SL2(Z)` as the two integer matrices in turn.

use horolab_lie::{AmbientGroup, GroupElement, C64};
use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::LatticeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeKind {
    #[serde(rename = "SL2_GaussianIntegers")]
    GaussianIntegers,
    #[serde(rename = "SL2Z_x_SL2Z")]
    ZxZ,
    #[serde(rename = "SL2_ZSqrt2")]
    ZSqrt2,
}

impl LatticeKind {
    pub const ALL: [LatticeKind; 3] = [LatticeKind::GaussianIntegers, LatticeKind::ZxZ, LatticeKind::ZSqrt2];

    pub fn id(self) -> &'static str {
        match self {
            LatticeKind::GaussianIntegers => "SL2_GaussianIntegers",
            LatticeKind::ZxZ => "SL2Z_x_SL2Z",
            LatticeKind::ZSqrt2 => "SL2_ZSqrt2",
        }
    }

    pub fn group(self) -> AmbientGroup {
        match self {
            LatticeKind::GaussianIntegers => AmbientGroup::Sl2C,
            _ => AmbientGroup::Sl2RxSl2R,
        }
    }

    /// `d` in `x + y sqrt(d)`; zero when the second coordinate is unused.
    fn disc(self) -> i64 {
        match self {
            LatticeKind::GaussianIntegers => -1,
            LatticeKind::ZxZ => 0,
            LatticeKind::ZSqrt2 => 2,
        }
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for LatticeKind {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LatticeKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| LatticeError::Parse(format!("unknown lattice id {s:?}")))
    }
}

type Q = (i64, i64);
type M = [Q; 4];

fn qmul(d: i64, a: Q, b: Q) -> Option<Q> {
    let x = a.0.checked_mul(b.0)?.checked_add(d.checked_mul(a.1)?.checked_mul(b.1)?)?;
    let y = a.0.checked_mul(b.1)?.checked_add(a.1.checked_mul(b.0)?)?;
    Some((x, y))
}

fn qadd(a: Q, b: Q) -> Option<Q> {
    Some((a.0.checked_add(b.0)?, a.1.checked_add(b.1)?))
}

fn mmul(d: i64, a: &M, b: &M) -> Option<M> {
    let e = |i: usize, j: usize| qadd(qmul(d, a[2 * i], b[j])?, qmul(d, a[2 * i + 1], b[2 + j])?);
    Some([e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?])
}

/// Exact lattice element modulo the center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Elem(pub [i64; 8]);

impl Elem {
    pub const IDENTITY_GAUSS: Elem = Elem([1, 0, 0, 0, 0, 0, 1, 0]);
    pub const IDENTITY_ZXZ: Elem = Elem([1, 0, 0, 1, 1, 0, 0, 1]);

    pub fn identity(kind: LatticeKind) -> Elem {
        match kind {
            LatticeKind::ZxZ => Elem::IDENTITY_ZXZ,
            _ => Elem::IDENTITY_GAUSS,
        }
    }

    fn blocks(&self, kind: LatticeKind) -> Vec<M> {
        let c = &self.0;
        match kind {
            LatticeKind::ZxZ => vec![
                [(c[0], 0), (c[1], 0), (c[2], 0), (c[3], 0)],
                [(c[4], 0), (c[5], 0), (c[6], 0), (c[7], 0)],
            ],
            _ => vec![[(c[0], c[1]), (c[2], c[3]), (c[4], c[5]), (c[6], c[7])]],
        }
    }

    fn from_blocks(kind: LatticeKind, b: &[M]) -> Elem {
        let mut c = [0i64; 8];
        match kind {
            LatticeKind::ZxZ => {
                for (f, m) in b.iter().enumerate() {
                    for i in 0..4 {
                        c[4 * f + i] = m[i].0;
                    }
                }
            }
            _ => {
                for i in 0..4 {
                    c[2 * i] = b[0][i].0;
                    c[2 * i + 1] = b[0][i].1;
                }
            }
        }
        Elem(c).normalized(kind)
    }

    /// Representative of the class modulo `{+-I}` (per factor for the product):
    /// the first nonzero coordinate is positive.
    pub fn normalized(self, kind: LatticeKind) -> Elem {
        let mut c = self.0;
        let ranges: &[std::ops::Range<usize>] = match kind {
            LatticeKind::ZxZ => &[0..4, 4..8],
            _ => std::slice::from_ref(&(0..8)),
        };
        for r in ranges {
            if let Some(&first) = c[r.clone()].iter().find(|&&v| v != 0) {
                if first < 0 {
                    for v in &mut c[r.clone()] {
                        *v = -*v;
                    }
                }
            }
        }
        Elem(c)
    }

    pub fn mul(&self, o: &Elem, kind: LatticeKind) -> Option<Elem> {
        let d = kind.disc();
        let blocks: Option<Vec<M>> =
            self.blocks(kind).iter().zip(o.blocks(kind).iter()).map(|(a, b)| mmul(d, a, b)).collect();
        Some(Elem::from_blocks(kind, &blocks?))
    }

    /// Inverse via the adjugate (unit determinant).
    pub fn inv(&self, kind: LatticeKind) -> Elem {
        let b: Vec<M> = self
            .blocks(kind)
            .iter()
            .map(|m| [m[3], (-m[1].0, -m[1].1), (-m[2].0, -m[2].1), m[0]])
            .collect();
        Elem::from_blocks(kind, &b)
    }

    pub fn transpose(&self, kind: LatticeKind) -> Elem {
        let b: Vec<M> = self.blocks(kind).iter().map(|m| [m[0], m[2], m[1], m[3]]).collect();
        Elem::from_blocks(kind, &b)
    }

    pub fn is_identity(&self, kind: LatticeKind) -> bool {
        *self == Elem::identity(kind)
    }

    /// Exact determinant check (`det = 1`, or `-1` would not be in the group).
    pub fn has_unit_det(&self, kind: LatticeKind) -> bool {
        let d = kind.disc();
        self.blocks(kind).iter().all(|m| {
            let det = qmul(d, m[0], m[3]).zip(qmul(d, m[1], m[2])).map(|(p, q)| (p.0 - q.0, p.1 - q.1));
            det == Some((1, 0))
        })
    }

    pub fn to_group(&self, kind: LatticeKind) -> GroupElement {
        let c = &self.0;
        match kind {
            LatticeKind::GaussianIntegers => GroupElement::Sl2C(Matrix2::new(
                C64::new(c[0] as f64, c[1] as f64),
                C64::new(c[2] as f64, c[3] as f64),
                C64::new(c[4] as f64, c[5] as f64),
                C64::new(c[6] as f64, c[7] as f64),
            )),
            LatticeKind::ZxZ => GroupElement::Product(
                Matrix2::new(c[0] as f64, c[1] as f64, c[2] as f64, c[3] as f64),
                Matrix2::new(c[4] as f64, c[5] as f64, c[6] as f64, c[7] as f64),
            ),
            LatticeKind::ZSqrt2 => {
                let s = std::f64::consts::SQRT_2;
                let e = |i: usize, sign: f64| c[2 * i] as f64 + sign * s * c[2 * i + 1] as f64;
                GroupElement::Product(
                    Matrix2::new(e(0, 1.0), e(1, 1.0), e(2, 1.0), e(3, 1.0)),
                    Matrix2::new(e(0, -1.0), e(1, -1.0), e(2, -1.0), e(3, -1.0)),
                )
            }
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.0;
        write!(f, "{} {} {} {} {} {} {} {}", c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7])
    }
}

/// Upper-triangular translation `[[1, x], [0, 1]]` by an integer of the base ring
/// (`x = p + q i` or `p + q sqrt 2`; for the product, `p` in the first factor and `q` in the second).
pub fn translation(kind: LatticeKind, p: i64, q: i64) -> Elem {
    match kind {
        LatticeKind::ZxZ => Elem([1, p, 0, 1, 1, q, 0, 1]),
        _ => Elem([1, 0, p, q, 0, 0, 1, 0]),
    }
}

/// The involution `[[0, -1], [1, 0]]` (in both factors for the product).
pub fn s_elem(kind: LatticeKind) -> Elem {
    match kind {
        LatticeKind::ZxZ => Elem([0, -1, 1, 0, 0, -1, 1, 0]).normalized(kind),
        _ => Elem([0, 0, -1, 0, 1, 0, 0, 0]).normalized(kind),
    }
}
