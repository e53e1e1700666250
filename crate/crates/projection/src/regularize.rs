//! Dyadic regularization: extract a cube of `F` on which counting is
//! regular at exponent `alpha - 20 eps`.
//!
//! The set is placed in a dyadic unit cube (translated to its lower corner,
//! side the least power of two exceeding its extent). A bottom-up pass makes
//! the cube tree uniform: at each level every surviving cube keeps exactly
//! `R_l` surviving children, `R_l` chosen to keep the most points. The
//! branching numbers then fix the cut level `k2`, and the first surviving
//! cube at that level is returned.

use crate::certificate::{regularity_scan, Certificate};
use crate::energy::{energy_constant, DEFAULT_ENERGY_CAP};
use crate::{ProjectionError, Result};
use horolab_lie::Sl2;
use serde::{Deserialize, Serialize};

/// Levels of the cube tree are `2^-(l T)` with `T = tree_step`.
pub const DEFAULT_TREE_STEP: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularizeConfig {
    pub tree_step: u32,
    pub energy_cap: f64,
}

impl Default for RegularizeConfig {
    fn default() -> Self {
        RegularizeConfig { tree_step: DEFAULT_TREE_STEP, energy_cap: DEFAULT_ENERGY_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regularized {
    pub w0: Sl2,
    pub w0_index: usize,
    pub b1: f64,
    /// `((#F)^{-(3-a+5e)/(3-a+20e)}, (#F)^{-e})`.
    pub b1_bounds: (f64, f64),
    /// `F'` as indices into `F`, ascending.
    pub indices: Vec<usize>,
    pub points: Vec<Sl2>,
    pub certificate: Certificate,
    /// Explicit ceiling implied by the uniform tree; the certificate never exceeds it.
    pub certificate_bound: f64,
    pub energy_d: f64,
    pub tree_step: u32,
    pub k0: u32,
    pub k1: u32,
    pub k2: u32,
    /// `R_1, ..., R_k1`.
    pub branching: Vec<u32>,
    /// Size of the uniformized set `F1`.
    pub uniform_size: usize,
    /// Side of the enclosing dyadic cube.
    pub cube_side: f64,
}

impl Regularized {
    pub fn b1_in_bounds(&self) -> bool {
        let tol = 1e-12;
        self.b1 >= self.b1_bounds.0 * (1.0 - tol) && self.b1 <= self.b1_bounds.1 * (1.0 + tol)
    }

    pub fn exponent(&self) -> f64 {
        self.certificate.alpha
    }
}

pub fn b1_bounds(n: usize, alpha: f64, eps: f64) -> (f64, f64) {
    let n = n as f64;
    let e = (3.0 - alpha + 5.0 * eps) / (3.0 - alpha + 20.0 * eps);
    (n.powf(-e), n.powf(-eps))
}

/// `8 * 2^{(T + 1) exponent}`: a closed ball of radius `b` meets at most 8
/// cubes of the finest level whose side is at least `2b`.
pub fn certificate_bound(tree_step: u32, exponent: f64) -> f64 {
    8.0 * 2f64.powf((tree_step as f64 + 1.0) * exponent.max(0.0))
}

struct Group {
    cell: [u64; 3],
    members: Vec<usize>,
}

fn enclosing_side(extent: f64) -> f64 {
    if extent <= 0.0 {
        return 1.0;
    }
    let mut l = 2f64.powi(extent.log2().floor() as i32);
    while l <= extent {
        l *= 2.0;
    }
    while l * 0.5 > extent {
        l *= 0.5;
    }
    l
}

/// Most-mass branching number: maximizes `R * #{Q : n(Q) >= R}`, ties to the larger `R`.
fn pick_branching(counts: &[usize]) -> usize {
    let max = counts.iter().copied().max().unwrap_or(1);
    let mut best = (0usize, 1usize);
    for r in 1..=max {
        let mass = r * counts.iter().filter(|&&c| c >= r).count();
        if mass >= best.0 {
            best = (mass, r);
        }
    }
    best.1
}

pub fn dyadic_regularize(f: &[Sl2], alpha: f64, eps: f64, cfg: &RegularizeConfig) -> Result<Regularized> {
    if f.is_empty() {
        return Err(ProjectionError::Empty);
    }
    if !(alpha > 0.0 && alpha < 3.0 && eps > 0.0) {
        return Err(ProjectionError::InvalidParameter(format!("alpha = {alpha}, eps = {eps}")));
    }
    if cfg.tree_step == 0 {
        return Err(ProjectionError::InvalidParameter("tree_step must be positive".into()));
    }
    let energy_d = energy_constant(f, alpha, eps)?;
    if energy_d > cfg.energy_cap {
        return Err(ProjectionError::HypothesisFail { d: energy_d, cap: cfg.energy_cap });
    }
    let n = f.len();
    let t = cfg.tree_step;
    let k1 = ((n as f64).log2() / t as f64).ceil().max(0.0) as u32;
    let bits = t * k1;
    if bits > 60 {
        return Err(ProjectionError::InvalidParameter(format!("tree depth {bits} bits too fine")));
    }

    let lo = f.iter().fold([f64::INFINITY; 3], |m, p| [m[0].min(p.a), m[1].min(p.b), m[2].min(p.c)]);
    let hi = f.iter().fold([f64::NEG_INFINITY; 3], |m, p| [m[0].max(p.a), m[1].max(p.b), m[2].max(p.c)]);
    let extent = (0..3).fold(0.0f64, |m, i| m.max(hi[i] - lo[i]));
    let side = enclosing_side(extent);
    let top = 1u64 << bits;
    let cell_of = |p: &Sl2| -> [u64; 3] {
        let c = [p.a, p.b, p.c];
        std::array::from_fn(|i| {
            let u = (c[i] - lo[i]) / side;
            ((u * top as f64).floor().max(0.0) as u64).min(top - 1)
        })
    };

    // Finest level: one point per cell, lowest index wins.
    let mut finest: Vec<([u64; 3], usize)> = f.iter().enumerate().map(|(i, p)| (cell_of(p), i)).collect();
    finest.sort_unstable();
    finest.dedup_by(|a, b| a.0 == b.0);
    let mut groups: Vec<Group> = finest.into_iter().map(|(cell, i)| Group { cell, members: vec![i] }).collect();

    let mut branching = vec![0u32; k1 as usize];
    for level in (0..k1).rev() {
        let parent = |c: &[u64; 3]| -> [u64; 3] { std::array::from_fn(|i| c[i] >> t) };
        groups.sort_by(|a, b| (parent(&a.cell), a.cell).cmp(&(parent(&b.cell), b.cell)));
        let mut runs: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for i in 1..=groups.len() {
            if i == groups.len() || parent(&groups[i].cell) != parent(&groups[start].cell) {
                runs.push((start, i));
                start = i;
            }
        }
        let counts: Vec<usize> = runs.iter().map(|r| r.1 - r.0).collect();
        let r = pick_branching(&counts);
        branching[level as usize] = r as u32;
        let mut next = Vec::new();
        for &(s, e) in &runs {
            if e - s < r {
                continue;
            }
            let mut members: Vec<usize> = groups[s..s + r].iter().flat_map(|g| g.members.iter().copied()).collect();
            members.sort_unstable();
            next.push(Group { cell: parent(&groups[s].cell), members });
        }
        groups = next;
    }
    // Levels 0..k1 have been folded; `groups` is the single top cube.
    debug_assert_eq!(groups.len(), 1);
    let uniform_size = groups[0].members.len();

    let exponent = alpha - 20.0 * eps;
    let k0 = (eps * k1 as f64).floor() as u32;
    let logs: Vec<f64> = branching.iter().map(|&r| (r as f64).log2()).collect();
    let m_k = |k: u32| -> f64 {
        let mut best = f64::INFINITY;
        let mut acc = 0.0;
        for l in (k + 1)..=k1 {
            acc += logs[(l - 1) as usize];
            best = best.min(acc / (l - k) as f64);
        }
        best
    };
    let target = exponent * t as f64 - 1e-12;
    let k2 = ((k0 + 1)..=k1).find(|&k| m_k(k) >= target).unwrap_or(k1);

    // Members of the first surviving cube at level k2.
    let shift = t * (k1 - k2);
    let mut members: Vec<usize> = groups.pop().map(|g| g.members).unwrap_or_default();
    let key = |i: usize| -> [u64; 3] {
        let c = cell_of(&f[i]);
        std::array::from_fn(|j| c[j] >> shift)
    };
    let chosen = members.iter().map(|&i| key(i)).min().expect("nonempty");
    members.retain(|&i| key(i) == chosen);
    members.sort_unstable();

    let w0_index = members[0];
    let w0 = f[w0_index];
    let b1 = side * 2f64.powi(-((t * k2) as i32));
    let b0 = (1.0 / n as f64).min(b1);
    let points: Vec<Sl2> = members.iter().map(|&i| f[i]).collect();
    let certificate = regularity_scan(&points, exponent, b0, b1)?;
    Ok(Regularized {
        w0,
        w0_index,
        b1,
        b1_bounds: b1_bounds(n, alpha, eps),
        indices: members,
        points,
        certificate,
        certificate_bound: certificate_bound(t, exponent),
        energy_d,
        tree_step: t,
        k0,
        k1,
        k2,
        branching,
        uniform_size,
        cube_side: side,
    })
}
