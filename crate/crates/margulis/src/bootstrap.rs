//! Dimension-increment bootstrap: push a sheet set by the walk, keep the
//! sheets meeting one covering box, and watch the Margulis function.

use crate::sheets::{ad_h, SheetPoint, SheetSet};
use crate::walk::RandomWalk;
use crate::MargulisError;
use horolab_lattice::{near_stabilizer_search, reduce_point, LatticeCache, QuotientPoint};
use horolab_lie::{a_elem, exp_lie, GroupElement, LieVector, Sl2, M2r};
use horolab_mc::{rng_for, Rng};
use serde::{Deserialize, Serialize};

const LABEL_BOOTSTRAP: u64 = 0x54;

/// Selection exponent in `#F_1 = ceil(beta^p #F)` used by the source argument.
pub const LITERAL_SELECTION_EXPONENT: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Initial,
    /// Single sheet: nothing to select.
    Trivial,
    /// `sum_{w' != w} ||w - w'||^-alpha <= C (#F)^{1 + eps}` after normalizing by `beta^alpha`.
    Energy,
    /// `max f <= e^{(M - 2 kappa7 eps / 3) n}`.
    Improve,
    /// Neither alternative observed at this scale.
    Stall,
    /// The start point has a non-elementary near-stabilizer.
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub beta: f64,
    pub eta: f64,
    /// Walk step `m0`.
    pub m0: f64,
    /// Walk depth per step.
    pub ell: usize,
    /// Selection exponent `p` in `#F_1 = ceil(beta^p #F)`.
    pub p: f64,
    /// Covering box radius; `None` means `beta`.
    pub covering_scale: Option<f64>,
    pub initial_sheets: usize,
    /// Walk draws tried per step; the one whose best box holds most sheets wins.
    pub candidates: usize,
    /// Constant of the energy alternative.
    pub energy_constant: f64,
    /// `kappa7`; `None` means `1 / (8 m0)`.
    pub kappa7: Option<f64>,
    /// Normalizing time `n` of the exponent `M`; `None` means `t`.
    pub n: Option<f64>,
    pub i_max_override: Option<usize>,
    pub stabilizer_tol: f64,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            beta: 1e-6,
            eta: 0.005,
            m0: 8.0,
            ell: 1,
            p: 2.0,
            covering_scale: None,
            initial_sheets: 64,
            candidates: 8,
            energy_constant: 2.0,
            kappa7: None,
            n: None,
            i_max_override: None,
            stabilizer_tol: 1e-8,
            seed: 1,
        }
    }
}

impl BootstrapConfig {
    pub fn kappa7(&self) -> f64 {
        self.kappa7.unwrap_or(1.0 / (8.0 * self.m0))
    }

    pub fn covering_scale(&self) -> f64 {
        self.covering_scale.unwrap_or(self.beta)
    }
}

/// One JSON-lines record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iter: usize,
    pub num_sheets: usize,
    pub beta: f64,
    pub max_f: f64,
    pub branch: Branch,
    pub seed: u64,
    /// Current exponent bound `M`.
    pub m_bound: f64,
    /// `beta^alpha max_w sum_{w' != w} ||w - w'||^-alpha`.
    pub energy: f64,
    /// Sheets meeting the chosen covering box.
    pub box_sheets: usize,
    /// Fewer sheets in the box than the selection rule asked for.
    pub shortfall: bool,
}

#[derive(Clone, Debug)]
pub struct BootstrapState {
    pub iter: usize,
    pub set: SheetSet,
    pub alpha: f64,
    pub eps: f64,
    pub m_bound: f64,
    pub n: f64,
    pub i_max: usize,
    pub history: Vec<TraceRecord>,
}

/// `i_max = floor((6M - 3) / (4 kappa7 eps)) + 1`, at least 1.
pub fn i_max(m_bound: f64, kappa7: f64, eps: f64) -> usize {
    let v = ((6.0 * m_bound - 3.0) / (4.0 * kappa7 * eps)).floor();
    if v.is_finite() && v > 0.0 {
        v as usize + 1
    } else {
        1
    }
}

/// `ceil(beta^p #F)`, at least 1.
pub fn selection_target(beta: f64, p: f64, count: usize) -> usize {
    ((beta.powf(p) * count as f64).ceil() as usize).max(1)
}

/// `max_w f_E(e, center of sheet w)`.
pub fn max_f(set: &SheetSet, alpha: f64, cache: &LatticeCache) -> f64 {
    (0..set.len())
        .map(|i| set.margulis_f(alpha, &M2r::identity(), &SheetPoint::center(i), cache))
        .fold(0.0, f64::max)
}

/// Covering box choice for one push `h0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Covering {
    pub center: usize,
    /// Sheet indices meeting the box, nearest first (the center leads).
    pub members: Vec<usize>,
    /// Images `Ad(h0) v_{w c}` of the members.
    pub images: Vec<Sl2>,
}

/// Box around the pushed sheet `c` maximizing the number of pushed sheets
/// `w` with `||Ad(h0) v_wc|| <= scale`.
pub fn best_covering(set: &SheetSet, h0: &M2r, scale: f64) -> Covering {
    let mut best: Option<Covering> = None;
    for c in 0..set.len() {
        let mut m: Vec<(f64, usize, Sl2)> = (0..set.len())
            .map(|w| {
                let img = ad_h(h0, &set.offset(w, c));
                (img.norm(), w, img)
            })
            .filter(|(n, _, _)| *n <= scale)
            .collect();
        m.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        if best.as_ref().is_none_or(|b| m.len() > b.members.len()) {
            best = Some(Covering {
                center: c,
                members: m.iter().map(|x| x.1).collect(),
                images: m.iter().map(|x| x.2).collect(),
            });
        }
    }
    best.expect("nonempty sheet set")
}

/// `mu_E` mass of the pulled-back covering box: sheet fraction times the
/// coordinate volume ratio of `Q^H` (sides `beta e^-m`, `beta`, `eta`) to `E`.
pub fn covering_mass(set: &SheetSet, box_sheets: usize, push_time: f64) -> f64 {
    let frac = box_sheets as f64 / set.len() as f64;
    frac * (-push_time).exp() * set.eta / (set.beta + 0.1 * set.eta)
}

pub fn bootstrap_step(
    state: &BootstrapState,
    h0: &M2r,
    covering_scale: f64,
    cfg: &BootstrapConfig,
    cache: &LatticeCache,
) -> Result<BootstrapState, MargulisError> {
    let set = &state.set;
    let iter = state.iter + 1;
    let alpha = state.alpha;
    if set.len() == 1 {
        let mut next = state.clone();
        next.iter = iter;
        let rec = TraceRecord {
            iter,
            num_sheets: 1,
            beta: set.beta,
            max_f: max_f(set, alpha, cache),
            branch: Branch::Trivial,
            seed: cfg.seed,
            m_bound: state.m_bound,
            energy: 0.0,
            box_sheets: 1,
            shortfall: false,
        };
        next.history.push(rec);
        return Ok(next);
    }
    let push_time = cfg.ell as f64 * cfg.m0;
    let cov = best_covering(set, h0, covering_scale);
    let mass = covering_mass(set, cov.members.len(), push_time);
    let threshold = set.beta.powi(13) * (-push_time).exp();
    if mass < threshold {
        return Err(MargulisError::EmptyCovering { mass, threshold });
    }
    let target = selection_target(set.beta, cfg.p, set.len());
    let take = target.min(cov.members.len());
    let f1: Vec<Sl2> = cov.images[..take].to_vec();
    let grp = set.base.rep.group();
    let new_rep = GroupElement::from_h(grp, h0) * exp_lie(grp, &LieVector::from_r(set.f[cov.center])) * set.base.rep;
    let base = reduce_point(&new_rep, set.base.lattice);
    let new_set = SheetSet::new(base, f1, covering_scale, set.eta)?;
    let mf = max_f(&new_set, alpha, cache);
    let e_norm = new_set.energy(alpha) * covering_scale.powf(alpha);
    let k = new_set.len();
    let drop = 2.0 * cfg.kappa7() * state.eps / 3.0;
    let (branch, m_bound) = if k == 1 {
        (Branch::Trivial, state.m_bound)
    } else if e_norm <= cfg.energy_constant * (k as f64).powf(1.0 + state.eps) {
        (Branch::Energy, state.m_bound)
    } else if mf.ln() / state.n <= state.m_bound - drop {
        (Branch::Improve, state.m_bound - drop)
    } else {
        (Branch::Stall, state.m_bound)
    };
    let mut history = state.history.clone();
    history.push(TraceRecord {
        iter,
        num_sheets: k,
        beta: covering_scale,
        max_f: mf,
        branch,
        seed: cfg.seed,
        m_bound,
        energy: e_norm,
        box_sheets: cov.members.len(),
        shortfall: cov.members.len() < target,
    });
    Ok(BootstrapState { iter, set: new_set, m_bound, history, ..state.clone() })
}

/// Transversal cloud of the pushed neighbourhood `a_t B x0`: `0` plus
/// `Ad(a_t) w'` for `w'` uniform in the box `|a|, |c| <= beta`, `|b| <= beta e^-t`.
pub fn initial_f<R: Rng + ?Sized>(count: usize, beta: f64, t: f64, rng: &mut R) -> Vec<Sl2> {
    let mut f = vec![Sl2::ZERO];
    let bt = beta * (-t).exp();
    while f.len() < count {
        let w = Sl2::new(rng.gen_range(-beta..=beta), rng.gen_range(-bt..=bt), rng.gen_range(-beta..=beta));
        let pushed = Sl2::new(w.a, t.exp() * w.b, (-t).exp() * w.c);
        if pushed.norm() <= beta && pushed != Sl2::ZERO {
            f.push(pushed);
        }
    }
    f
}

pub fn bootstrap_run(
    x0: &QuotientPoint,
    t: f64,
    alpha: f64,
    eps: f64,
    cfg: &BootstrapConfig,
    cache: &LatticeCache,
) -> Result<(SheetSet, Vec<TraceRecord>), MargulisError> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(MargulisError::InvalidEpsilon { eps });
    }
    crate::contraction::check_alpha(alpha, 0.0)?;
    let n = cfg.n.unwrap_or(t).max(1.0);
    let stab = near_stabilizer_search(x0, cfg.stabilizer_tol, cache);
    if stab.periodic {
        let set = SheetSet::new(*x0, vec![Sl2::ZERO], cfg.beta, cfg.eta)?;
        let mf = max_f(&set, alpha, cache);
        let rec = TraceRecord {
            iter: 0,
            num_sheets: 1,
            beta: cfg.beta,
            max_f: mf,
            branch: Branch::Periodic,
            seed: cfg.seed,
            m_bound: mf.ln() / n,
            energy: 0.0,
            box_sheets: 0,
            shortfall: false,
        };
        return Ok((set, vec![rec]));
    }
    let grp = x0.rep.group();
    let base = reduce_point(&(a_elem(grp, t) * x0.rep), x0.lattice);
    let mut rng = rng_for(cfg.seed, LABEL_BOOTSTRAP, 0);
    let f0 = initial_f(cfg.initial_sheets.max(1), cfg.beta, t, &mut rng);
    let set = SheetSet::new(base, f0, cfg.beta, cfg.eta)?;
    let mf = max_f(&set, alpha, cache);
    let m_bound = mf.ln() / n;
    let imax = cfg.i_max_override.unwrap_or_else(|| i_max(m_bound, cfg.kappa7(), eps));
    let e_norm = set.energy(alpha) * cfg.beta.powf(alpha);
    let mut state = BootstrapState {
        iter: 0,
        alpha,
        eps,
        m_bound,
        n,
        i_max: imax,
        history: vec![TraceRecord {
            iter: 0,
            num_sheets: set.len(),
            beta: cfg.beta,
            max_f: mf,
            branch: Branch::Initial,
            seed: cfg.seed,
            m_bound,
            energy: e_norm,
            box_sheets: set.len(),
            shortfall: false,
        }],
        set,
    };
    let walk = RandomWalk::new(alpha, cfg.m0, cfg.ell)?;
    let scale = cfg.covering_scale();
    while state.iter < state.i_max {
        let mut h_best = M2r::identity();
        let mut best = 0usize;
        for _ in 0..cfg.candidates.max(1) {
            let d = walk.draw(&mut rng);
            let h = walk.element(cfg.ell, *d.r_hat.last().unwrap_or(&0.0));
            let k = best_covering(&state.set, &h, scale).members.len();
            if k > best {
                best = k;
                h_best = h;
            }
        }
        state = bootstrap_step(&state, &h_best, scale, cfg, cache)?;
        let last = state.history.last().expect("step records");
        if matches!(last.branch, Branch::Energy | Branch::Trivial) {
            break;
        }
    }
    Ok((state.set, state.history))
}

/// Trace as JSON lines.
pub fn trace_jsonl(trace: &[TraceRecord]) -> String {
    trace.iter().map(|r| serde_json::to_string(r).expect("serializable") + "\n").collect()
}
