use horolab_lattice::*;
use horolab_lie::*;
use horolab_margulis::*;
use horolab_mc::rng_for;
use std::sync::OnceLock;

fn cache() -> &'static LatticeCache {
    static C: OnceLock<LatticeCache> = OnceLock::new();
    C.get_or_init(|| enumerate_lattice(&Lattice::new(LatticeKind::GaussianIntegers), 6).unwrap())
}

const KIND: LatticeKind = LatticeKind::GaussianIntegers;

fn generic_point() -> QuotientPoint {
    let g = GroupElement::Sl2C(M2c::new(
        C64::new(1.0, 0.0),
        C64::new(std::f64::consts::E / 7.0, 1.0 / std::f64::consts::PI),
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
    ));
    reduce_point(&g, KIND)
}

fn state_for(set: SheetSet) -> BootstrapState {
    BootstrapState { iter: 0, set, alpha: 0.5, eps: 0.1, m_bound: 10.0, n: 2.0, i_max: 5, history: vec![] }
}

#[test]
fn single_sheet_step_is_trivial() {
    let e = reduce_point(&GroupElement::identity(KIND.group()), KIND);
    let set = SheetSet::new(e, vec![Sl2::ZERO], 1e-6, 0.005).unwrap();
    let cfg = BootstrapConfig::default();
    let next = bootstrap_step(&state_for(set), &(a_mat(8.0) * u_mat(0.3)), 1e-6, &cfg, cache()).unwrap();
    assert_eq!(next.set.f, vec![Sl2::ZERO]);
    assert_eq!(next.history.last().unwrap().branch, Branch::Trivial);
}

#[test]
fn literal_selection_collapses() {
    assert_eq!(selection_target(2f64.powi(-6), LITERAL_SELECTION_EXPONENT, 256), 1);
    assert_eq!(selection_target(2f64.powi(-6), 0.5, 256), 32);
    assert_eq!(selection_target(2f64.powi(-6), 1.0, 256), 4);
}

/// Independent box scan: sheets `w` whose transversal part of
/// `h0 exp(w) exp(-w_c) h0^-1` has norm at most `scale`.
fn brute_box_count(set: &SheetSet, c: usize, h0: &M2r, scale: f64) -> usize {
    let grp = set.base.rep.group();
    let hg = GroupElement::from_h(grp, h0);
    let exp_r = |w: Sl2| exp_lie(grp, &LieVector::from_r(w));
    set.f
        .iter()
        .filter(|w| {
            let g = hg * exp_r(**w) * exp_r(-set.f[c]) * hg.inv();
            decompose_transversal(&g, DEFAULT_NEIGHBORHOOD).unwrap().w.norm() <= scale
        })
        .count()
}

#[test]
fn rescaled_selection_matches_box_scan() {
    let e = reduce_point(&GroupElement::identity(KIND.group()), KIND);
    let beta = 2f64.powi(-6);
    let mut rng = rng_for(31, 0, 0);
    let set = SheetSet::new(e, random_f(64, beta, &mut rng), beta, 0.125).unwrap();
    let cfg = BootstrapConfig { beta, eta: 0.125, m0: 1.0, p: 0.5, ..Default::default() };
    let h0 = a_mat(1.0) * u_mat(0.4);
    let cov = best_covering(&set, &h0, beta);
    let brute = brute_box_count(&set, cov.center, &h0, beta);
    assert_eq!(cov.members.len(), brute);
    let best_brute = (0..set.len()).map(|c| brute_box_count(&set, c, &h0, beta)).max().unwrap();
    assert_eq!(cov.members.len(), best_brute);
    let next = bootstrap_step(&state_for(set.clone()), &h0, beta, &cfg, cache()).unwrap();
    let target = selection_target(beta, 0.5, 64);
    assert_eq!(next.set.len(), target.min(brute));
    let rec = next.history.last().unwrap();
    assert_eq!(rec.box_sheets, brute);
    assert_eq!(rec.shortfall, brute < target);
    assert!(next.set.f.iter().all(|w| w.norm() <= beta * (1.0 + 1e-12)));
}

#[test]
fn covering_threshold_margin_at_desk_scale() {
    // A one-sheet box out of 64 still clears beta^13 e^-lm by many orders.
    let e = reduce_point(&GroupElement::identity(KIND.group()), KIND);
    let mut rng = rng_for(32, 0, 0);
    let cfg = BootstrapConfig::default();
    let set = SheetSet::new(e, random_f(64, cfg.beta, &mut rng), cfg.beta, cfg.eta).unwrap();
    let push = cfg.ell as f64 * cfg.m0;
    let mass = covering_mass(&set, 1, push);
    let threshold = cfg.beta.powi(13) * (-push).exp();
    assert!(mass > 1e60 * threshold, "{mass} vs {threshold}");
}

#[test]
fn periodic_start_fires_detector() {
    let e = reduce_point(&GroupElement::identity(KIND.group()), KIND);
    let (set, trace) = bootstrap_run(&e, 2.0, 0.5, 0.1, &BootstrapConfig::default(), cache()).unwrap();
    assert_eq!(trace.len(), 1);
    assert_eq!(trace[0].branch, Branch::Periodic);
    assert_eq!(set.f, vec![Sl2::ZERO]);
}

#[test]
fn generic_run_trace() {
    let cfg = BootstrapConfig::default();
    let (_, trace) = bootstrap_run(&generic_point(), 2.0, 0.5, 0.1, &cfg, cache()).unwrap();
    assert!(trace.len() >= 2);
    assert_eq!(trace[0].branch, Branch::Initial);
    assert_eq!(trace[0].num_sheets, cfg.initial_sheets);
    assert!(trace.windows(2).all(|w| w[1].m_bound <= w[0].m_bound));
    let i_max = i_max(trace[0].m_bound, cfg.kappa7(), 0.1);
    assert!(trace.last().unwrap().iter <= i_max);
    for w in trace.windows(2) {
        let target = selection_target(w[0].beta, cfg.p, w[0].num_sheets);
        assert_eq!(w[1].num_sheets, target.min(w[1].box_sheets));
    }
    let text = trace_jsonl(&trace);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for k in ["iter", "num_sheets", "beta", "max_f", "branch", "seed"] {
            assert!(v.get(k).is_some(), "missing {k}");
        }
    }
}

#[test]
fn run_is_deterministic() {
    let cfg = BootstrapConfig { covering_scale: Some(2e-5), ..Default::default() };
    let a = bootstrap_run(&generic_point(), 2.0, 0.5, 0.1, &cfg, cache()).unwrap().1;
    let b = horolab_mc::with_threads(2, || bootstrap_run(&generic_point(), 2.0, 0.5, 0.1, &cfg, cache()).unwrap().1);
    assert_eq!(trace_jsonl(&a), trace_jsonl(&b));
}

#[test]
fn eps_must_be_positive() {
    let r = bootstrap_run(&generic_point(), 2.0, 0.5, 0.0, &BootstrapConfig::default(), cache());
    assert!(matches!(r, Err(MargulisError::InvalidEpsilon { .. })));
}

#[test]
fn i_max_formula() {
    assert_eq!(i_max(1.0, 0.25, 0.5), ((6.0 - 3.0) / (4.0 * 0.25 * 0.5)) as usize + 1);
    assert_eq!(i_max(0.1, 0.25, 0.5), 1);
}
