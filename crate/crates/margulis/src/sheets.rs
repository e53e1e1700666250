//! Sheeted sets `E = Box . {exp(w) y0 : w in F}` and their Margulis functions.

use crate::MargulisError;
use horolab_lattice::{inj_value, reduce_point, LatticeCache, QuotientPoint};
use horolab_lie::{
    adjoint, bch_difference, bruhat, exp_lie, from_bruhat, BruhatCoords, GroupElement, HBox, LieVector, Sl2,
    M2r, DEFAULT_BETA0,
};
use horolab_mc::{par_map, Rng};
use serde::Serialize;

/// Fitted `C14` for `#I(a_m u_r, z) <= C14 beta^-6 e^{4m} #F`: twice the
/// largest ratio (4.2e-30) over 16-sheet sets at `eGamma`, beta in
/// {1e-7, 1e-6, 2.5e-5}, m in {1, 2, 4, 8}.
pub const C14_COUNT_FIXTURE: f64 = 8.4e-30;
/// Same sweep for `psi(a_m u_r, z) <= C14 beta^-7 e^{5m} #F` at alpha = 0.5 (fit 5.1e-34).
pub const C14_PSI_FIXTURE: f64 = 1.02e-33;

/// Slack on `beta <= eta^2` and on `||w|| <= beta`.
const SCALE_SLACK: f64 = 1e-12;

/// Offsets between two sheets: `exp(w_b) exp(-w_a) = h exp(v)`.
#[derive(Clone, Copy, Debug)]
struct PairShift {
    h_inv: M2r,
    v: Sl2,
}

/// A finite union of `H`-boxes through `exp(w) y0`, `w` in `F`.
#[derive(Clone, Debug)]
pub struct SheetSet {
    pub base: QuotientPoint,
    pub f: Vec<Sl2>,
    pub beta: f64,
    pub eta: f64,
    /// `shifts[b][a]` for `b != a`.
    shifts: Vec<Vec<Option<PairShift>>>,
}

/// A point `h_z exp(w_a) y0` of the sheet set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SheetPoint {
    pub sheet: usize,
    pub coords: BruhatCoords,
}

impl SheetPoint {
    pub fn center(sheet: usize) -> Self {
        SheetPoint { sheet, coords: BruhatCoords { s: 0.0, tau: 0.0, rho: 0.0 } }
    }
}

/// Displacements `I_E(h, z)` together with `inj(hz)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Displacements {
    pub vectors: Vec<Sl2>,
    pub inj: f64,
}

impl Displacements {
    /// `sum ||w||^-alpha`, or `inj^-alpha` when there is no displacement.
    pub fn f(&self, alpha: f64) -> f64 {
        if self.vectors.is_empty() {
            self.inj.powf(-alpha)
        } else {
            self.vectors.iter().map(|w| w.norm().powf(-alpha)).sum()
        }
    }

    /// `max(#I, 1) inj^-alpha`.
    pub fn psi(&self, alpha: f64) -> f64 {
        self.vectors.len().max(1) as f64 * self.inj.powf(-alpha)
    }
}

impl SheetSet {
    pub fn new(base: QuotientPoint, f: Vec<Sl2>, beta: f64, eta: f64) -> Result<Self, MargulisError> {
        let bad = |m: String| Err(MargulisError::InvalidSheetSet(m));
        if !(beta > 0.0 && eta > 0.0) {
            return bad(format!("scales beta={beta}, eta={eta}"));
        }
        if beta > eta * eta * (1.0 + SCALE_SLACK) {
            return bad(format!("beta={beta} exceeds eta^2={}", eta * eta));
        }
        if !f.contains(&Sl2::ZERO) {
            return bad("F does not contain 0".into());
        }
        if let Some(w) = f.iter().find(|w| w.norm().is_nan() || w.norm() > beta * (1.0 + SCALE_SLACK)) {
            return bad(format!("||w||={} exceeds beta", w.norm()));
        }
        let grp = base.rep.group();
        let beta0 = beta.max(DEFAULT_BETA0);
        let idx: Vec<usize> = (0..f.len()).collect();
        let rows: Result<Vec<Vec<Option<PairShift>>>, MargulisError> = par_map(&idx, |&b| {
            (0..f.len())
                .map(|a| {
                    if a == b {
                        return Ok(None);
                    }
                    let d = bch_difference(grp, &f[b], &f[a], beta0)?;
                    let h = d.h.h_part(1e-9).expect("split returns an H element");
                    let h_inv = M2r::new(h[(1, 1)], -h[(0, 1)], -h[(1, 0)], h[(0, 0)]);
                    Ok(Some(PairShift { h_inv, v: d.w }))
                })
                .collect()
        })
        .into_iter()
        .collect();
        Ok(SheetSet { base, f, beta, eta, shifts: rows? })
    }

    /// `v_ba` with `exp(w_b) exp(-w_a) = h_ba exp(v_ba)`; zero for `a == b`.
    pub fn offset(&self, b: usize, a: usize) -> Sl2 {
        self.shifts[b][a].map_or(Sl2::ZERO, |s| s.v)
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// `E = B^H_beta . {u_r : |r| <= 0.1 eta}` in Bruhat coordinates.
    pub fn h_box(&self) -> HBox {
        let b = self.beta;
        HBox { s: (-b, b), tau: (-b, b), rho: (-b - 0.1 * self.eta, b + 0.1 * self.eta), shift: 0.0 }
    }

    /// Whether the base lies in `X_{2 eta}`.
    pub fn base_in_thick(&self, cache: &LatticeCache) -> bool {
        inj_value(&self.base, cache) >= 2.0 * self.eta
    }

    /// Representative of `z` in `G`.
    pub fn point_rep(&self, z: &SheetPoint) -> GroupElement {
        let grp = self.base.rep.group();
        GroupElement::from_h(grp, &from_bruhat(&z.coords))
            * exp_lie(grp, &LieVector::from_r(self.f[z.sheet]))
            * self.base.rep
    }

    /// `I_E(h, z)`: for every other sheet `b`, the point of sheet `b` on the
    /// transversal through `z` is `exp(Ad(h_z) v_ba) z`; it belongs to `E` iff
    /// `h_z h_ba^-1` is in the box. Kept when `0 < ||Ad(h h_z) v_ba|| < inj(hz)`.
    pub fn displacements(&self, h: &M2r, z: &SheetPoint, cache: &LatticeCache) -> Displacements {
        let grp = self.base.rep.group();
        let hz_rep = GroupElement::from_h(grp, h) * self.point_rep(z);
        let inj = inj_value(&reduce_point(&hz_rep, self.base.lattice), cache);
        let hbox = self.h_box();
        let hz = from_bruhat(&z.coords);
        let conj = GroupElement::from_h(grp, &(h * hz));
        let mut vectors = Vec::new();
        for b in 0..self.f.len() {
            let Some(s) = self.shifts[b][z.sheet] else { continue };
            let inside = bruhat(&(hz * s.h_inv)).map(|c| hbox.contains_coords(&c)).unwrap_or(false);
            if !inside {
                continue;
            }
            let w = adjoint(&conj, &LieVector::from_r(s.v)).r;
            debug_assert!((ad_h(&(h * hz), &s.v) - w).norm() <= 1e-9 * (1.0 + w.norm()));
            let n = w.norm();
            if n > 0.0 && n < inj {
                vectors.push(w);
            }
        }
        Displacements { vectors, inj }
    }

    pub fn margulis_f(&self, alpha: f64, h: &M2r, z: &SheetPoint, cache: &LatticeCache) -> f64 {
        self.displacements(h, z, cache).f(alpha)
    }

    pub fn psi(&self, alpha: f64, h: &M2r, z: &SheetPoint, cache: &LatticeCache) -> f64 {
        self.displacements(h, z, cache).psi(alpha)
    }

    /// Draw from `mu_E`: uniform sheet, uniform box coordinates.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> SheetPoint {
        let sheet = rng.gen_range(0..self.f.len());
        let b = self.h_box();
        let coords = BruhatCoords {
            s: rng.gen_range(b.s.0..=b.s.1),
            tau: rng.gen_range(b.tau.0..=b.tau.1),
            rho: rng.gen_range(b.rho.0..=b.rho.1),
        };
        SheetPoint { sheet, coords }
    }

    /// `max_w sum_{w' != w} ||w - w'||^-alpha`.
    pub fn energy(&self, alpha: f64) -> f64 {
        energy(&self.f, alpha)
    }
}

/// Largest per-point alpha-energy `max_w sum_{w' != w} ||w - w'||^-alpha` (0 for one point).
pub fn energy(f: &[Sl2], alpha: f64) -> f64 {
    f.iter()
        .map(|w| {
            f.iter()
                .filter(|v| *v != w)
                .map(|v| (*w - *v).norm().powf(-alpha))
                .sum::<f64>()
                + 0.0
        })
        .fold(0.0, f64::max)
}

/// Seeded random transversal set: `0` plus `n - 1` uniform draws of the
/// `beta`-ball of `r`.
pub fn random_f<R: Rng + ?Sized>(n: usize, beta: f64, rng: &mut R) -> Vec<Sl2> {
    let mut f = vec![Sl2::ZERO];
    f.extend((1..n).map(|_| {
        Sl2::new(rng.gen_range(-beta..=beta), rng.gen_range(-beta..=beta), rng.gen_range(-beta..=beta))
    }));
    f
}

/// `Ad(h) v = h v h^-1` for `h` in `H` acting on `r`.
pub fn ad_h(h: &M2r, v: &Sl2) -> Sl2 {
    let hi = M2r::new(h[(1, 1)], -h[(0, 1)], -h[(1, 0)], h[(0, 0)]);
    Sl2::from_matrix(&(h * v.to_matrix() * hi))
}
