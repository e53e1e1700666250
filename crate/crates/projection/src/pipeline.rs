//! From an energy-regular `F ⊂ r` around `x1` to a regular measure on a
//! finite `I ⊂ R` of unipotent `v_s` displacements at a thick point `x2`.

use crate::certificate::PointSetMeasure;
use crate::geometry::xi;
use crate::interval::{interval_regularity, IntervalRegularity};
use crate::regularize::{dyadic_regularize, RegularizeConfig, Regularized};
use crate::theorem::{general_position, verify_projection_theorem, ProjectionReport, TheoremConfig};
use crate::{ProjectionError, Result};
use horolab_lattice::{distance_value, inj_value, reduce_point, LatticeCache, QuotientPoint, ETA_X};
use horolab_lie::{a_elem, bch_difference, exp_lie, u_elem, v_elem, GroupElement, LieVector, Sl2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Stand-in for the `(#F)^-eps <= c eta^3` size condition.
pub const DEFAULT_SIZE_FLOOR: f64 = 0.99;
/// BCH neighborhood used to move `F'` to `E`.
pub const DEFAULT_BCH_BETA0: f64 = 0.1;
/// Direction window `|r| <= 1e-4`.
pub const DIRECTION_WINDOW: f64 = 1e-4;
pub const DEFAULT_PIPELINE_DIRECTIONS: usize = 64;
/// Thick-part level for `x2`: `eta = ETA_X / 200`, inside `eta < 0.01 eta_X`.
pub const DEFAULT_PIPELINE_ETA: f64 = ETA_X / 200.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub alpha: f64,
    pub eps: f64,
    pub size_floor: f64,
    pub beta0: f64,
    pub window: f64,
    pub directions: usize,
    pub eta: f64,
    pub regularize: RegularizeConfig,
    pub seed: u64,
}

impl PipelineConfig {
    pub fn new(alpha: f64, eps: f64) -> Self {
        PipelineConfig {
            alpha,
            eps,
            size_floor: DEFAULT_SIZE_FLOOR,
            beta0: DEFAULT_BCH_BETA0,
            window: DIRECTION_WINDOW,
            directions: DEFAULT_PIPELINE_DIRECTIONS,
            eta: DEFAULT_PIPELINE_ETA,
            regularize: RegularizeConfig::default(),
            seed: 0,
        }
    }
}

/// `(#F)^{-15 eps / (3 - alpha + 20 eps)}`, the shortest interval the output
/// measure is asked to control.
pub fn measure_floor(n: usize, alpha: f64, eps: f64) -> f64 {
    (n as f64).powf(-15.0 * eps / (3.0 - alpha + 20.0 * eps))
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub x2: QuotientPoint,
    /// `u_r0 exp(w0) x1`.
    pub x2_prime: QuotientPoint,
    /// `I`, one entry per point of `E_r` (values may repeat).
    pub support: Vec<f64>,
    pub weights: Vec<f64>,
    /// Index into `F` of the `w'` behind each support entry.
    pub sources: Vec<usize>,
    pub b1: f64,
    pub t: f64,
    pub r0: f64,
    pub r: f64,
    pub w0: Sl2,
    pub regularized: Regularized,
    /// `E` after the general-position rotation.
    pub e_points: Vec<Sl2>,
    pub report: ProjectionReport,
    pub thick_directions: usize,
    /// Largest BCH constant `||h - I|| / (beta ||w||)` seen while building `E`.
    pub bch_c_max: f64,
    /// Regularity of `rho` at exponent `alpha - 30 eps` above [`measure_floor`].
    pub regularity: IntervalRegularity,
}

fn r_vec(w: &Sl2) -> LieVector {
    LieVector::from_r(*w)
}

pub fn project_pipeline(
    f: &[Sl2],
    x1: &QuotientPoint,
    cfg: &PipelineConfig,
    cache: &LatticeCache,
) -> Result<PipelineOutput> {
    let n = f.len();
    if n == 0 {
        return Err(ProjectionError::Empty);
    }
    let size = (n as f64).powf(-cfg.eps);
    if size > cfg.size_floor {
        return Err(ProjectionError::SizeFloor { n, value: size, floor: cfg.size_floor });
    }
    let grp = x1.rep.group();
    let reg = dyadic_regularize(f, cfg.alpha, cfg.eps, &cfg.regularize)?;
    let w0 = reg.w0;

    // exp(w') exp(-w0) = h exp(w)
    let mut e = Vec::with_capacity(reg.points.len());
    let mut bch_c_max: f64 = 0.0;
    for wp in &reg.points {
        let d = bch_difference(grp, wp, &w0, cfg.beta0)?;
        bch_c_max = bch_c_max.max(d.c_fit);
        e.push(d.w);
    }
    let gp = general_position(&e)?;
    let x2p_rep = u_elem(grp, gp.r0) * exp_lie(grp, &r_vec(&w0)) * x1.rep;
    let x2_prime = reduce_point(&x2p_rep, x1.lattice);

    let b1 = reg.b1;
    let t = b1.ln().abs();
    let radius = gp.rotated.iter().fold(0.0f64, |m, w| m.max(w.norm()));
    let exponent = cfg.alpha - 20.0 * cfg.eps;
    let b0 = reg.certificate.b0;
    let b1_e = b1.max(radius);
    let measure = PointSetMeasure::certified(gp.rotated.clone(), Sl2::ZERO, b0.min(b1_e), b1_e, exponent)?;
    let tcfg = TheoremConfig {
        kappa: cfg.eps,
        interval: (-cfg.window, cfg.window),
        directions: cfg.directions,
        seed: cfg.seed,
    };
    let report = verify_projection_theorem(&measure, &tcfg)?;

    let at = a_elem(grp, t);
    let thick: Vec<bool> = report
        .directions
        .par_iter()
        .map(|&r| inj_value(&reduce_point(&(at * u_elem(grp, r) * x2p_rep), x1.lattice), cache) >= cfg.eta)
        .collect();
    let thick_directions = thick.iter().filter(|&&b| b).count();
    let pick = report
        .good_directions
        .iter()
        .enumerate()
        .filter(|(_, &i)| thick[i])
        .min_by(|a, b| report.direction_constants[*a.1].total_cmp(&report.direction_constants[*b.1]).then(a.1.cmp(b.1)));
    let Some((slot, &dir)) = pick else {
        return Err(ProjectionError::RecurrenceFail {
            good: report.good_directions.len(),
            thick: thick_directions,
            total: report.directions.len(),
        });
    };
    let r = report.directions[dir];
    let x2 = reduce_point(&(at * u_elem(grp, r) * x2p_rep), x1.lattice);

    let scale = t.exp();
    let members = &report.good_subsets[slot];
    let support: Vec<f64> = members.iter().map(|&k| scale * xi(&gp.rotated[k as usize], r)).collect();
    let weights = vec![1.0 / members.len() as f64; members.len()];
    let sources: Vec<usize> = members.iter().map(|&k| reg.indices[gp.indices[k as usize]]).collect();
    let regularity =
        interval_regularity(&support, &weights, cfg.alpha - 30.0 * cfg.eps, measure_floor(n, cfg.alpha, cfg.eps));
    Ok(PipelineOutput {
        x2,
        x2_prime,
        support,
        weights,
        sources,
        b1,
        t,
        r0: gp.r0,
        r,
        w0,
        regularized: reg,
        e_points: gp.rotated,
        report,
        thick_directions,
        bch_c_max,
        regularity,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipCheck {
    /// `max_s d_X(v_s x2, a_t u_{r + r0} exp(w') x1) / b1`.
    pub fitted_c: f64,
    pub worst_index: usize,
    pub checked: usize,
}

/// Distance from each `v_s x2` to the point of `a_t {u_r : |r| <= 2} . F`
/// it came from, in units of `b1`.
pub fn membership_check(
    out: &PipelineOutput,
    f: &[Sl2],
    x1: &QuotientPoint,
    cache: &LatticeCache,
) -> MembershipCheck {
    let grp = x1.rep.group();
    let pre = a_elem(grp, out.t) * u_elem(grp, out.r + out.r0);
    let ratios: Vec<f64> = out
        .support
        .iter()
        .zip(&out.sources)
        .map(|(&s, &src)| {
            let moved = reduce_point(&(v_elem(grp, s) * out.x2.rep), x1.lattice);
            let target_rep: GroupElement = pre * exp_lie(grp, &r_vec(&f[src])) * x1.rep;
            let target = reduce_point(&target_rep, x1.lattice);
            distance_value(&moved, &target, cache) / out.b1
        })
        .collect();
    let (worst_index, fitted_c) =
        ratios.iter().copied().enumerate().fold((0, 0.0), |m, (i, c)| if c > m.1 { (i, c) } else { m });
    MembershipCheck { fitted_c, worst_index, checked: ratios.len() }
}
