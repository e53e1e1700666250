//! Boxes in `H` described in Bruhat coordinates `u^-_s a_tau u_rho`.

use crate::algebra::LieVector;
use crate::group::{AmbientGroup, GroupElement};
use crate::matfn::M2r;
use crate::transversal::{decompose_transversal, DEFAULT_NEIGHBORHOOD};
use crate::LieError;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Below this the (1,1) entry is treated as a chart singularity.
const CHART_EPS: f64 = 1e-14;
/// Slack for deciding that an element lies in `H`.
const H_TOL: f64 = 1e-12;

/// Closed intervals are tested with this relative slack so that generator
/// products landing exactly on a face count as members.
const FACE_SLACK: f64 = 1e-12;

fn within(x: f64, r: (f64, f64)) -> bool {
    let tol = FACE_SLACK * (1.0 + r.0.abs().max(r.1.abs()));
    x >= r.0 - tol && x <= r.1 + tol
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BruhatCoords {
    pub s: f64,
    pub tau: f64,
    pub rho: f64,
}

/// `[[a, b], [c, d]] = u^-_{c/a} diag(a, 1/a) u_{b/a}` with `diag(a, 1/a) = a_{2 ln a}`.
pub fn bruhat(m: &M2r) -> Result<BruhatCoords, LieError> {
    let a = m[(0, 0)];
    if a.abs() < CHART_EPS {
        return Err(LieError::ChartSingular { a11: a });
    }
    if a < 0.0 {
        // -I times a chart point; no box around the identity contains it.
        return Err(LieError::ChartSingular { a11: a });
    }
    Ok(BruhatCoords { s: m[(1, 0)] / a, tau: 2.0 * a.ln(), rho: m[(0, 1)] / a })
}

pub fn from_bruhat(c: &BruhatCoords) -> M2r {
    let a = (0.5 * c.tau).exp();
    M2r::new(a, a * c.rho, c.s * a, c.s * a * c.rho + 1.0 / a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoxKind {
    /// `B^H_beta`.
    BH,
    /// `B^G_beta = B^H_beta exp(B_r(0, beta))`.
    BG,
    /// `E_{eta,t,beta} = B^H_beta a_t {u_r : r in [0, eta]}`.
    E,
    /// `Q^H_{eta,beta,m}`.
    QH,
    /// `Q^H_{eta,beta,m} exp(B_r(0, transversal))`.
    QG,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxParams {
    pub beta: f64,
    pub eta: f64,
    pub t: f64,
    pub m: f64,
    /// Transversal radius used by `QG`.
    pub transversal: f64,
}

impl BoxParams {
    pub fn new(beta: f64, eta: f64, t: f64, m: f64) -> Self {
        BoxParams { beta, eta, t, m, transversal: beta }
    }
}

/// Coordinate rectangle for `m a_{-shift}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HBox {
    pub s: (f64, f64),
    pub tau: (f64, f64),
    pub rho: (f64, f64),
    pub shift: f64,
}

impl HBox {
    pub fn contains_coords(&self, c: &BruhatCoords) -> bool {
        within(c.s, self.s) && within(c.tau, self.tau) && within(c.rho, self.rho)
    }

    pub fn contains(&self, m: &M2r) -> Membership {
        let k = if self.shift == 0.0 {
            *m
        } else {
            let e = (0.5 * self.shift).exp();
            m * M2r::new(1.0 / e, 0.0, 0.0, e)
        };
        match bruhat(&k) {
            Ok(c) => Membership { member: self.contains_coords(&c), chart_singular: false },
            Err(LieError::ChartSingular { a11 }) => {
                Membership { member: false, chart_singular: a11.abs() < CHART_EPS }
            }
            Err(_) => unreachable!(),
        }
    }

    /// Uniform draw in the coordinate rectangle (times `a_shift`).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> M2r {
        let pick = |rng: &mut R, r: (f64, f64)| if r.1 > r.0 { rng.gen_range(r.0..=r.1) } else { r.0 };
        let c = BruhatCoords { s: pick(rng, self.s), tau: pick(rng, self.tau), rho: pick(rng, self.rho) };
        let m = from_bruhat(&c);
        if self.shift == 0.0 {
            m
        } else {
            let e = (0.5 * self.shift).exp();
            m * M2r::new(e, 0.0, 0.0, 1.0 / e)
        }
    }

    /// Lebesgue volume of the coordinate rectangle.
    pub fn coord_volume(&self) -> f64 {
        (self.s.1 - self.s.0) * (self.tau.1 - self.tau.0) * (self.rho.1 - self.rho.0)
    }
}

/// The `H`-rectangle of a box kind (`BG`/`QG` give their `H` factor).
pub fn h_box(p: &BoxParams, kind: BoxKind) -> HBox {
    let b = p.beta;
    match kind {
        BoxKind::BH | BoxKind::BG => HBox { s: (-b, b), tau: (-b, b), rho: (-b, b), shift: 0.0 },
        BoxKind::E => HBox {
            s: (-b, b),
            tau: (-b, b),
            rho: (-b, p.t.exp() * p.eta + b),
            shift: p.t,
        },
        BoxKind::QH | BoxKind::QG => {
            let sm = b * (-p.m).exp();
            HBox { s: (-sm, sm), tau: (-b, b), rho: (-p.eta, p.eta), shift: 0.0 }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Set when the Bruhat chart degenerates; the element is then reported outside.
    pub chart_singular: bool,
}

/// Exact set membership via the triangular factorization.
pub fn box_membership(g: &GroupElement, p: &BoxParams, kind: BoxKind) -> Membership {
    let hb = h_box(p, kind);
    match kind {
        BoxKind::BH | BoxKind::E | BoxKind::QH => match g.h_part(H_TOL) {
            Some(m) => hb.contains(&m),
            None => Membership { member: false, chart_singular: false },
        },
        BoxKind::BG | BoxKind::QG => {
            let radius = if kind == BoxKind::BG { p.beta } else { p.transversal };
            let d = match decompose_transversal(g, DEFAULT_NEIGHBORHOOD) {
                Ok(d) => d,
                Err(_) => return Membership { member: false, chart_singular: false },
            };
            if d.w.norm() > radius {
                return Membership { member: false, chart_singular: false };
            }
            let m = d.h.h_part(1e-9).expect("split returns an H element");
            hb.contains(&m)
        }
    }
}

/// `h exp(w)` helper for sampling `G`-boxes.
pub fn compose(grp: AmbientGroup, h: &M2r, w: &LieVector) -> GroupElement {
    GroupElement::from_h(grp, h) * crate::algebra::exp_lie(grp, w)
}

