//! One function per experiment suite. Each returns JSON records, optional CSV
//! tables and a pass flag; writing them out is left to the caller.

use crate::config::ExperimentConfig;
use crate::CliError;
use horolab_equidist as eq;
use horolab_lattice::{
    inj_value, load_or_build, recurrence_fraction, reduce_point, Lattice, LatticeCache, LatticeKind, QuotientPoint,
};
use horolab_lie::{
    adjoint, bch_difference, exp_lie, exp_r, u_elem, v_elem, AmbientGroup, GroupElement, LieVector, Sl2,
};
use horolab_margulis as mg;
use horolab_mc::{rng_for, Estimate, Rng};
use horolab_projection as pj;
use serde_json::{json, Value};
use std::time::Instant;

/// Stream labels for draws made directly by the suites.
mod labels {
    pub const KERNEL: u64 = 0xC1;
    pub const BCH: u64 = 0xC2;
    pub const FRESH_UNIT: u64 = 0xC3;
    pub const SHEETS: u64 = 0xC4;
}

/// Sub-seed `k` of the run seed; streams of different suites never share a label.
pub fn sub_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k << 32)
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub pass: bool,
    /// One line for humans.
    pub summary: String,
    pub records: Vec<Value>,
    /// `(file name, body)`; the body starts with the column header.
    pub tables: Vec<(String, String)>,
}

impl SuiteReport {
    fn new(suite: &'static str, pass: bool, summary: String, records: Vec<Value>) -> Self {
        SuiteReport { suite, pass, summary, records, tables: Vec::new() }
    }
}

pub const SUITES: &[&str] = &[
    "kernel",
    "contraction",
    "regularize",
    "projection-verify",
    "pipeline",
    "inequality",
    "bootstrap",
    "recurrence",
    "equidist",
    "density",
    "periodic-f",
];

/// Shared state: the config and its lattice cache, built on first use.
pub struct Context {
    pub cfg: ExperimentConfig,
    cache: std::sync::OnceLock<LatticeCache>,
}

impl Context {
    pub fn new(cfg: ExperimentConfig) -> Self {
        Context { cfg, cache: std::sync::OnceLock::new() }
    }

    pub fn cache(&self) -> Result<&LatticeCache, CliError> {
        if let Some(c) = self.cache.get() {
            return Ok(c);
        }
        let c = load_or_build(&Lattice::new(self.cfg.lattice), self.cfg.cache_depth, &self.cfg.cache_dir())?;
        Ok(self.cache.get_or_init(|| c))
    }

    fn kind(&self) -> LatticeKind {
        self.cfg.lattice
    }

    pub fn generic_point(&self) -> QuotientPoint {
        let k = self.kind();
        reduce_point(&exp_lie(k.group(), &LieVector::from_array(&self.cfg.base_point)), k)
    }

    pub fn e_gamma(&self) -> QuotientPoint {
        let k = self.kind();
        reduce_point(&GroupElement::identity(k.group()), k)
    }
}

pub fn run_suite(name: &str, ctx: &Context) -> Result<SuiteReport, CliError> {
    match name {
        "kernel" => kernel(ctx),
        "contraction" => contraction(ctx),
        "regularize" => regularize(ctx),
        "projection-verify" => projection_verify(ctx),
        "pipeline" => pipeline(ctx),
        "inequality" => inequality(ctx),
        "bootstrap" => bootstrap(ctx),
        "recurrence" => recurrence(ctx),
        "equidist" => equidist(ctx),
        "density" => density(ctx),
        "periodic-f" => periodic_f(ctx),
        other => Err(CliError::UnknownSuite(other.to_string())),
    }
}

fn estimate_json(e: &Estimate) -> Value {
    json!({ "mean": e.mean, "stderr": e.stderr, "n": e.n })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn rand_sl2<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Sl2 {
    Sl2::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
}

fn rand_lie<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> LieVector {
    LieVector::new(rand_sl2(rng, scale), rand_sl2(rng, scale))
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn lie_dist(a: &LieVector, b: &LieVector) -> f64 {
    let (x, y) = (a.to_array(), b.to_array());
    max_abs(&std::array::from_fn::<f64, 6, _>(|i| x[i] - y[i]))
}

/// Worst error of each identity, relative to `max(1, size of the values)`.
#[derive(Default)]
struct KernelTally {
    det: f64,
    ad_hom: f64,
    split: f64,
    xi: f64,
}

/// Criterion 1: determinant, `Ad` homomorphism, `h + r` split under `Ad(H)`
/// and the `xi_r` identity, each on `kernel_checks` draws per ambient group.
pub fn kernel(ctx: &Context) -> Result<SuiteReport, CliError> {
    let cfg = &ctx.cfg;
    let tol = cfg.kernel_tol;
    let mut records = Vec::new();
    let mut pass = true;
    for (gi, grp) in [AmbientGroup::Sl2C, AmbientGroup::Sl2RxSl2R].into_iter().enumerate() {
        let mut rng = rng_for(cfg.seed, labels::KERNEL, gi as u64);
        let mut t = KernelTally::default();
        let mut violations = [0usize; 4];
        for _ in 0..cfg.kernel_checks {
            let g = exp_lie(grp, &rand_lie(&mut rng, 1.0));
            let h = exp_lie(grp, &rand_lie(&mut rng, 1.0));
            let w = rand_lie(&mut rng, 1.0);

            let det = g.det_error();
            let lhs = adjoint(&(g * h), &w);
            let rhs = adjoint(&g, &adjoint(&h, &w));
            let hom = lie_dist(&lhs, &rhs) / lhs.norm().max(1.0);

            let hm = exp_r(&rand_sl2(&mut rng, 1.0).to_matrix());
            let hg = GroupElement::from_h(grp, &hm);
            let ah = adjoint(&hg, &LieVector::from_h(w.h));
            let ar = adjoint(&hg, &LieVector::from_r(w.r));
            let split = (ah.r.norm() / ah.norm().max(1.0)).max(ar.h.norm() / ar.norm().max(1.0));

            let r = rng.gen_range(-2.0..=2.0);
            let wr = w.r;
            let oracle = -wr.c * r * r - 2.0 * wr.a * r + wr.b;
            let got = adjoint(&u_elem(grp, r), &LieVector::from_r(wr)).r.b;
            let xi = (got - oracle).abs() / oracle.abs().max(1.0);

            for (k, (e, slot)) in
                [(det, &mut t.det), (hom, &mut t.ad_hom), (split, &mut t.split), (xi, &mut t.xi)].into_iter().enumerate()
            {
                *slot = slot.max(e);
                violations[k] += usize::from(!(e <= tol));
            }
        }
        let ok = violations.iter().all(|&v| v == 0);
        pass &= ok;
        records.push(json!({
            "group": format!("{grp:?}"),
            "checks": cfg.kernel_checks,
            "tol": tol,
            "max_det_error": t.det,
            "max_ad_hom_error": t.ad_hom,
            "max_split_leak": t.split,
            "max_xi_error": t.xi,
            "violations": violations,
            "pass": ok,
        }));
    }
    let summary = format!("{} checks x 4 identities x 2 groups at {tol:e}", cfg.kernel_checks);
    Ok(SuiteReport::new("kernel", pass, summary, records))
}

/// Criterion 2: `exp(w1) exp(-w2) = h exp(w)` with `0.5 |w1 - w2| <= |w| <= 2 |w1 - w2|`.
pub fn bch_bounds(ctx: &Context) -> Result<SuiteReport, CliError> {
    let cfg = &ctx.cfg;
    let beta = cfg.bch_beta;
    let mut records = Vec::new();
    let mut pass = true;
    for (gi, grp) in [AmbientGroup::Sl2C, AmbientGroup::Sl2RxSl2R].into_iter().enumerate() {
        let mut rng = rng_for(cfg.seed, labels::BCH, gi as u64);
        let (mut bound_viol, mut resid_viol) = (0usize, 0usize);
        let (mut lo, mut hi, mut resid, mut c_max) = (f64::INFINITY, 0.0f64, 0.0f64, 0.0f64);
        for _ in 0..cfg.bch_pairs {
            let w1 = rand_sl2(&mut rng, beta);
            let w2 = rand_sl2(&mut rng, beta);
            let d = bch_difference(grp, &w1, &w2, horolab_lie::DEFAULT_BETA0)?;
            let diff = (w1 - w2).norm();
            let q = d.w.norm() / diff;
            lo = lo.min(q);
            hi = hi.max(q);
            resid = resid.max(d.residual);
            c_max = c_max.max(d.c_fit);
            bound_viol += usize::from(!(0.5 * diff <= d.w.norm() && d.w.norm() <= 2.0 * diff));
            resid_viol += usize::from(!(d.residual <= cfg.bch_residual));
        }
        let ok = bound_viol == 0 && resid_viol == 0;
        pass &= ok;
        records.push(json!({
            "group": format!("{grp:?}"),
            "pairs": cfg.bch_pairs,
            "beta": beta,
            "ratio_range": [lo, hi],
            "max_residual": resid,
            "c_fit_max": c_max,
            "bound_violations": bound_viol,
            "residual_violations": resid_viol,
            "pass": ok,
        }));
    }
    let summary = format!("{} pairs x 2 groups at beta {beta:e}", cfg.bch_pairs);
    Ok(SuiteReport::new("bch", pass, summary, records))
}

/// Criteria 1 and 2 together, as the `kernel` subcommand.
fn kernel_all(ctx: &Context) -> Result<SuiteReport, CliError> {
    let a = kernel(ctx)?;
    let b = bch_bounds(ctx)?;
    let mut records = a.records;
    records.extend(b.records);
    Ok(SuiteReport::new("kernel", a.pass && b.pass, format!("{}; {}", a.summary, b.summary), records))
}

/// Criterion 3: `m_alpha` from the calibration set, then fresh unit vectors.
pub fn contraction(ctx: &Context) -> Result<SuiteReport, CliError> {
    let cfg = &ctx.cfg;
    let mut records = Vec::new();
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, &alpha) in cfg.contraction_alphas.iter().enumerate() {
        let m = mg::solve_m_alpha(alpha, cfg.calibration_samples, cfg.seed)?;
        let mut rng = rng_for(cfg.seed, labels::FRESH_UNIT, i as u64);
        let fresh: Vec<LieVector> = (0..cfg.contraction_samples).map(|_| mg::random_unit(&mut rng)).collect();
        let reports = horolab_mc::par_map(&fresh, |w| mg::contraction_check(w, alpha, m as f64));
        let mut worst: f64 = 0.0;
        let mut failures = 0usize;
        for r in reports {
            let r = r?;
            worst = worst.max(r.ratio);
            failures += usize::from(!mg::contracts(r.ratio));
        }
        let ok = failures == 0 && m <= mg::M_CAP;
        pass &= ok;
        parts.push(format!("alpha {alpha}: m {m}, max ratio {worst:.6}"));
        records.push(json!({
            "alpha": alpha,
            "m_alpha": m,
            "cap": mg::M_CAP,
            "fresh": cfg.contraction_samples,
            "max_ratio": worst,
            "target": (-1.0f64).exp() * (1.0 + mg::CONTRACTION_SLACK),
            "failures": failures,
            "pass": ok,
        }));
    }
    Ok(SuiteReport::new("contraction", pass, parts.join("; "), records))
}

/// Criterion 4: grid, segment and Cantor product at `(alpha, eps)`.
pub fn regularize(ctx: &Context) -> Result<SuiteReport, CliError> {
    let cfg = &ctx.cfg;
    let sets = [
        ("grid", pj::uniform_grid(cfg.grid_side)),
        ("segment", pj::diagonal_segment(cfg.segment_points)),
        ("cantor", pj::cantor_product(cfg.cantor_levels as u32, cfg.cantor_ratio)),
    ];
    let mut records = Vec::new();
    let mut pass = true;
    let mut parts = Vec::new();
    for ((name, f), &fixture) in sets.into_iter().zip(&cfg.regularize_fixtures) {
        let r = pj::dyadic_regularize(&f, cfg.alpha, cfg.eps, &pj::RegularizeConfig::default())?;
        let c = &r.certificate;
        let m = pj::PointSetMeasure { certificate: Some(c.clone()), ..pj::PointSetMeasure::new(r.points.clone(), r.w0, c.b0, r.b1, c.alpha)? };
        let verified = m.verify();
        let ok = r.b1_in_bounds() && c.upsilon <= r.certificate_bound && verified && c.upsilon <= 2.0 * fixture;
        pass &= ok;
        parts.push(format!("{name}: b1 {:.3e}, upsilon {:.3}", r.b1, c.upsilon));
        records.push(json!({
            "set": name,
            "n": f.len(),
            "b1": r.b1,
            "b1_bounds": r.b1_bounds,
            "kept": r.points.len(),
            "exponent": c.alpha,
            "upsilon": c.upsilon,
            "certificate_bound": r.certificate_bound,
            "fixture": fixture,
            "verified": verified,
            "pass": ok,
        }));
    }
    Ok(SuiteReport::new("regularize", pass, parts.join("; "), records))
}

/// Criterion 5: the projection theorem on a Cantor product.
pub fn projection_verify(ctx: &Context) -> Result<SuiteReport, CliError> {
    let cfg = &ctx.cfg;
    let e = pj::cantor_product(cfg.projection_levels as u32, cfg.projection_ratio);
    let dim = pj::cantor_product_dim(cfg.projection_ratio);
    let m = pj::PointSetMeasure::certified(e, Sl2::ZERO, cfg.projection_b0, 1.0, dim)?;
    let tcfg = pj::TheoremConfig { directions: cfg.projection_directions, seed: cfg.seed, ..pj::TheoremConfig::new(cfg.kappa) };
    let rep = pj::verify_projection_theorem(&m, &tcfg)?;
    let pass = rep.pass && rep.fitted_c.is_finite() && rep.fitted_c <= 2.0 * cfg.projection_fixture;
    let summary = format!(
        "C {:.4} (fixture {}), directions {:.3}, points {:.3}",
        rep.fitted_c, cfg.projection_fixture, rep.good_direction_fraction, rep.good_point_fraction_min
    );
    let mut rec = to_value(&rep.summary());
    rec["exponent"] = json!(rep.exponent);
    rec["fixture"] = json!(cfg.projection_fixture);
    rec["pass"] = json!(pass);
    Ok(SuiteReport::new("projection-verify", pass, summary, vec![rec]))
}

fn pipeline_input(set: &str, points: usize, levels: usize, ratio: f64, scale: f64) -> Vec<Sl2> {
    let raw = match set {
        "halton" => pj::halton(points),
        _ => pj::cantor_product(levels as u32, ratio),
    };
    pj::scaled(&raw, scale)
}

/// Regularized `F` around the generic point, projected to a measure on the line.
pub fn pipeline(ctx: &Context) -> Result<SuiteReport, CliError> {
    let cfg = &ctx.cfg;
    let cache = ctx.cache()?;
    let x1 = ctx.generic_point();
    let f = pipeline_input(&cfg.pipeline_set, cfg.pipeline_points, cfg.cantor_levels, cfg.cantor_ratio, cfg.pipeline_scale);
    let pcfg = pj::PipelineConfig { beta0: cfg.pipeline_beta0, seed: cfg.seed, ..pj::PipelineConfig::new(cfg.pipeline_alpha, cfg.pipeline_eps) };
    let out = pj::project_pipeline(&f, &x1, &pcfg, cache)?;
    let member = pj::membership_check(&out, &f, &x1, cache);
    let pass = out.report.pass && out.regularity.constant.is_finite() && member.fitted_c <= 2.0 * cfg.membership_fixture;
    let rec = json!({
        "set": cfg.pipeline_set,
        "n": f.len(),
        "alpha": cfg.pipeline_alpha,
        "eps": cfg.pipeline_eps,
        "b1": out.b1,
        "t": out.t,
        "r0": out.r0,
        "r": out.r,
        "support_size": out.support.len(),
        "thick_directions": out.thick_directions,
        "bch_c_max": out.bch_c_max,
        "theorem": to_value(&out.report.summary()),
        "regularity": to_value(&out.regularity),
        "membership": to_value(&member),
        "membership_fixture": cfg.membership_fixture,
        "pass": pass,
    });
    let summary = format!(
        "|I| {}, b1 {:.3e}, membership {:.4}, regularity {:.3}",
        out.support.len(),
        out.b1,
        member.fitted_c,
        out.regularity.constant
    );
    Ok(SuiteReport::new("pipeline", pass, summary, vec![rec]))
}

/// Criterion 6: the Margulis inequality for a sheet set at `eGamma`.
pub fn inequality(ctx: &Context) -> Result<SuiteReport, CliError> {
    let cfg = &ctx.cfg;
    let cache = ctx.cache()?;
    let mut rng = rng_for(cfg.seed, labels::SHEETS, 0);
    let set = mg::SheetSet::new(ctx.e_gamma(), mg::random_f(cfg.sheets, cfg.sheet_beta, &mut rng), cfg.sheet_beta, cfg.sheet_eta)?;
    let walk = mg::RandomWalk::new(cfg.margulis_alpha, cfg.walk_m, cfg.walk_depth)?;
    let reps = mg::verify_depths(&set, &walk, &mg::SheetPoint::center(0), cfg.inequality_samples, cfg.seed, cache, mg::C13_FIXTURE);
    let pass = reps[1..].iter().all(|r| r.pass);
    let summary = reps[1..]
        .iter()
        .map(|r| format!("l={}: lhs {:.4e} rhs {:.4e}", r.ell, r.lhs.mean, r.rhs))
        .collect::<Vec<_>>()
        .join("; ");
    Ok(SuiteReport::new("inequality", pass, summary, reps.iter().map(to_value).collect()))
}

/// Bootstrap traces from the generic point and from `eGamma`.
pub fn bootstrap(ctx: &Context) -> Result<SuiteReport, CliError> {
    let cfg = &ctx.cfg;
    let cache = ctx.cache()?;
    let bcfg = mg::BootstrapConfig { seed: cfg.seed, ..Default::default() };
    let mut records = Vec::new();
    let (_, generic) = mg::bootstrap_run(&ctx.generic_point(), cfg.bootstrap_t, cfg.margulis_alpha, cfg.bootstrap_eps, &bcfg, cache)?;
    let (_, periodic) = mg::bootstrap_run(&ctx.e_gamma(), cfg.bootstrap_t, cfg.margulis_alpha, cfg.bootstrap_eps, &bcfg, cache)?;
    let monotone = generic.windows(2).all(|w| w[1].m_bound <= w[0].m_bound);
    let fired = periodic.len() == 1 && periodic[0].branch == mg::Branch::Periodic;
    for (point, trace) in [("generic", &generic), ("eGamma", &periodic)] {
        for r in trace.iter() {
            let mut v = to_value(r);
            v["point"] = json!(point);
            records.push(v);
        }
    }
    let summary = format!(
        "generic: {} steps, final branch {:?}; eGamma: {:?}",
        generic.len(),
        generic.last().map(|r| r.branch),
        periodic[0].branch
    );
    Ok(SuiteReport::new("bootstrap", monotone && fired, summary, records))
}

/// Smallest slope covering every point, and whether it is set by the smallest `eps`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    /// `(fraction + 2 stderr) / eps` per grid point.
    pub ratios: Vec<f64>,
    /// The ratio at the smallest `eps` exceeds every other ratio.
    pub blow_up: bool,
}

pub fn fit_slope(eps: &[f64], fractions: &[Estimate]) -> SlopeFit {
    let ratios: Vec<f64> = eps.iter().zip(fractions).map(|(&e, f)| (f.mean + 2.0 * f.stderr) / e).collect();
    let slope = ratios.iter().copied().fold(0.0, f64::max);
    let smallest = eps.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|p| p.0).unwrap_or(0);
    let rest = ratios.iter().enumerate().filter(|p| p.0 != smallest).map(|p| *p.1).fold(0.0, f64::max);
    SlopeFit { slope, blow_up: eps.len() > 1 && ratios[smallest] > rest, ratios }
}

/// Criterion 7: `|{r : inj(a_t u_r x) < eps^2}|` against a single slope in `eps`.
pub fn recurrence(ctx: &Context) -> Result<SuiteReport, CliError> {
    let cfg = &ctx.cfg;
    let cache = ctx.cache()?;
    let mut records = Vec::new();
    let mut pass = true;
    let mut parts = Vec::new();
    for (point, x) in [("eGamma", ctx.e_gamma()), ("generic", ctx.generic_point())] {
        let fr: Vec<Estimate> = cfg
            .recurrence_eps
            .iter()
            .map(|&e| recurrence_fraction(&x, cfg.recurrence_t, (0.0, 1.0), e, cache, cfg.recurrence_samples, cfg.seed))
            .collect();
        let fit = fit_slope(&cfg.recurrence_eps, &fr);
        let ok = fit.slope.is_finite() && !fit.blow_up;
        pass &= ok;
        parts.push(format!("{point}: slope {:.3}", fit.slope));
        records.push(json!({
            "point": point,
            "t": cfg.recurrence_t,
            "inj": inj_value(&x, cache),
            "eps": cfg.recurrence_eps,
            "fractions": fr.iter().map(estimate_json).collect::<Vec<_>>(),
            "fit": to_value(&fit),
            "pass": ok,
        }));
    }
    Ok(SuiteReport::new("recurrence", pass, parts.join("; "), records))
}

fn csv<T: serde::Serialize>(header: &str, rows: &[T], fields: impl Fn(&T) -> Vec<String>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&fields(r).join(","));
        s.push('\n');
    }
    s
}

fn density_csv(t: &eq::DensityTable) -> String {
    csv("T,covering_radius,n_samples,seed", &t.rows, |r| {
        vec![format!("{:?}", r.big_t), format!("{:?}", r.covering_radius), r.n_samples.to_string(), r.seed.to_string()]
    })
}

fn sweep_csv(rows: &[eq::SweepRow]) -> String {
    csv("t,b,discrepancy,mc_error", rows, |r| {
        vec![format!("{:?}", r.t), format!("{:?}", r.b), format!("{:?}", r.discrepancy), format!("{:?}", r.mc_error)]
    })
}

/// Criterion 8: covering radii of `B_P(e, T) x0` for the generic point and `eGamma`.
pub fn density(ctx: &Context) -> Result<SuiteReport, CliError> {
    let cfg = &ctx.cfg;
    let cache = ctx.cache()?;
    let tests = eq::test_grid(ctx.kind(), cfg.density_tests, cfg.test_eta, sub_seed(cfg.seed, 1), cache);
    let generic = eq::density_scan(&ctx.generic_point(), &cfg.density_t, &tests, cfg.density_samples, sub_seed(cfg.seed, 2), cache);
    let periodic = eq::density_scan(&ctx.e_gamma(), &cfg.density_t, &tests, cfg.density_samples, sub_seed(cfg.seed, 3), cache);
    let big_t = cfg.density_t.iter().copied().fold(0.0, f64::max);
    let defect = eq::p_ball_cloud(&ctx.e_gamma(), big_t, cfg.density_samples.min(2000), sub_seed(cfg.seed, 4))
        .iter()
        .map(eq::orbit_defect)
        .fold(0.0, f64::max);
    let decreasing = generic.strictly_decreasing();
    let stagnates = periodic.relative_drop() <= cfg.stagnation_drop;
    let pass = decreasing && stagnates && periodic.stabilizer.periodic && !generic.stabilizer.periodic;
    let rec = |name: &str, t: &eq::DensityTable| {
        json!({
            "point": name,
            "radii": t.rows.iter().map(|r| r.covering_radius).collect::<Vec<_>>(),
            "fitted_exponent": t.fitted_exponent,
            "strictly_decreasing": t.strictly_decreasing(),
            "relative_drop": t.relative_drop(),
            "stabilizer_hits": t.stabilizer.hits.len(),
            "periodic": t.stabilizer.periodic,
        })
    };
    let mut records = vec![rec("generic", &generic), rec("eGamma", &periodic)];
    records.push(json!({
        "stagnation_drop": cfg.stagnation_drop,
        "eGamma_max_orbit_defect": defect,
        "pass": pass,
    }));
    let summary = format!(
        "generic {:?} decreasing {decreasing}; eGamma drop {:.4}, periodic {}",
        generic.rows.iter().map(|r| (r.covering_radius * 1e4).round() / 1e4).collect::<Vec<_>>(),
        periodic.relative_drop(),
        periodic.stabilizer.periodic
    );
    let mut report = SuiteReport::new("density", pass, summary, records);
    report.tables = vec![("density_generic.csv".into(), density_csv(&generic)), ("density_periodic.csv".into(), density_csv(&periodic))];
    Ok(report)
}

/// Criterion 9: discrepancy sweeps over the window of the pipeline measure and
/// of the Dirac control at the base point.
pub fn equidist(ctx: &Context) -> Result<SuiteReport, CliError> {
    let cfg = &ctx.cfg;
    let cache = ctx.cache()?;
    let kind = ctx.kind();
    let x1 = ctx.generic_point();
    let f = pj::scaled(&pj::halton(cfg.equidist_points), cfg.pipeline_scale);
    let pcfg = pj::PipelineConfig { seed: cfg.seed, ..pj::PipelineConfig::new(cfg.equidist_alpha, cfg.equidist_eps) };
    let out = pj::project_pipeline(&f, &x1, &pcfg, cache)?;
    let (shift, rho) = eq::SparseMeasure::fitted_shifted(&out.support, cfg.rho_eps, cfg.rho_cap)?;
    let x2 = reduce_point(&(v_elem(kind.group(), shift) * out.x2.rep), kind);
    let centers = eq::test_grid(kind, cfg.bumps, cfg.test_eta, sub_seed(cfg.seed, 1), cache);
    let fs = centers
        .iter()
        .map(|z| eq::TestFunction::bump(z, cfg.bump_radius, eq::Normalization::Peak, cache))
        .collect::<Result<Vec<_>, _>>()?;
    let haar = eq::haar_oracle_family(&fs, &x1, cfg.haar_samples, sub_seed(cfg.seed, 2));
    let grid = eq::window_grid(&rho, cfg.window_points);
    let rho_rows = eq::discrepancy_sweep(&fs, &x2, &rho, &grid, cfg.rho_samples, &haar, sub_seed(cfg.seed, 3));
    let dirac = eq::SparseMeasure::dirac(rho.support[0], rho.regularity.b, cfg.rho_eps)?;
    let dirac_rows = eq::discrepancy_sweep(&fs, &x2, &dirac, &grid, cfg.dirac_samples, &haar, sub_seed(cfg.seed, 4));
    let rho_v = eq::decay_verdict(&rho_rows);
    let dirac_v = eq::decay_verdict(&dirac_rows);
    let exponent = cfg.equidist_alpha - 30.0 * cfg.equidist_eps;
    let floor = pj::measure_floor(f.len(), cfg.equidist_alpha, cfg.equidist_eps);
    let rho_check = eq::rho_regularity_check(&rho, exponent, floor, cfg.rho_cap);
    let dirac_check = eq::rho_regularity_check(&dirac, exponent, floor, cfg.rho_cap);
    let pass = rho_v.decays && !dirac_v.decays && !dirac_check.pass;
    let records = vec![json!({
        "n": f.len(),
        "support_size": rho.len(),
        "shift": shift,
        "b": rho.regularity.b,
        "scale_constant": rho.regularity.constant,
        "window": rho.window(),
        "haar": haar.iter().map(estimate_json).collect::<Vec<_>>(),
        "rho_verdict": to_value(&rho_v),
        "dirac_verdict": to_value(&dirac_v),
        "rho_regularity": { "exponent": exponent, "floor": floor, "constant": rho_check.constant, "pass": rho_check.pass },
        "dirac_regularity": { "constant": dirac_check.constant, "worst_interval": dirac_check.worst_interval, "pass": dirac_check.pass },
        "pass": pass,
    })];
    let summary = format!(
        "rho {:.4} -> {:.4} decays {}; dirac {:.4} -> {:.4} decays {}",
        rho_v.first, rho_v.last, rho_v.decays, dirac_v.first, dirac_v.last, dirac_v.decays
    );
    let mut report = SuiteReport::new("equidist", pass, summary, records);
    report.tables = vec![("sweep_rho.csv".into(), sweep_csv(&rho_rows)), ("sweep_dirac.csv".into(), sweep_csv(&dirac_rows))];
    Ok(report)
}

/// `f_Y` statistics on the periodic `H`-orbit through `eGamma`.
pub fn periodic_f(ctx: &Context) -> Result<SuiteReport, CliError> {
    let cfg = &ctx.cfg;
    let cache = ctx.cache()?;
    let sample = mg::periodic_sample(ctx.kind(), cfg.periodic_samples, cfg.seed);
    let st = mg::periodic_orbit_f(&sample, cfg.periodic_alpha, cfg.periodic_delta0, cache);
    let pass = st.mean_f.is_finite() && st.mean_f > 0.0;
    let summary = format!("mean f {:.4} +- {:.4}, max count {}", st.mean_f, st.stderr_f, st.max_count);
    Ok(SuiteReport::new("periodic-f", pass, summary, vec![to_value(&st)]))
}

/// Wall-clock seconds of `f`.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t0 = Instant::now();
    let v = f();
    (v, t0.elapsed().as_secs_f64())
}

pub(crate) fn dispatch(name: &str, ctx: &Context) -> Result<SuiteReport, CliError> {
    if name == "kernel" {
        kernel_all(ctx)
    } else {
        run_suite(name, ctx)
    }
}
