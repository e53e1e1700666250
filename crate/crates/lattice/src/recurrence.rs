use crate::cache::LatticeCache;
use crate::height::inj_value;
use crate::reduce::{reduce_point, QuotientPoint};
use horolab_lie::{a_elem, u_elem, GroupElement};
use horolab_mc::{par_mean, Estimate, Rng};

/// Stream labels for the Monte Carlo routines in this module.
pub mod labels {
    pub const RECURRENCE: u64 = 0x31;
    pub const THICK: u64 = 0x32;
    pub const INJ_WALK: u64 = 0x33;
}

/// Calibrated thick-part threshold: at least 99% of a pushed interval lands in
/// `X_eta` (fitted on `SL2(Z[i])`, frozen).
pub const ETA_X: f64 = 1.0e-4;

/// Calibrated additive offset in the time condition
/// `t >= |log(eta^2 inj(x))| + offset`.
pub const RECURRENCE_OFFSET: f64 = 1.0;

/// Height cap defining the compact part `X_cpt` among reduced points.
pub const X_CPT_HEIGHT: f64 = 4.0;

/// Left translate `h x`, reduced.
pub fn translate(h: &GroupElement, x: &QuotientPoint) -> QuotientPoint {
    reduce_point(&(h * &x.rep), x.lattice)
}

/// Reduced point of bounded height.
pub fn in_x_cpt(x: &QuotientPoint, height_cap: f64) -> bool {
    x.reduced && x.height <= height_cap
}

/// Earliest time allowed by the recurrence hypotheses.
pub fn recurrence_time(x: &QuotientPoint, eta: f64, cache: &LatticeCache) -> f64 {
    (eta * eta * inj_value(x, cache)).ln().abs() + RECURRENCE_OFFSET
}

fn pushed(x: &QuotientPoint, t: f64, r: f64) -> QuotientPoint {
    let g = x.rep.group();
    translate(&(a_elem(g, t) * u_elem(g, r)), x)
}

/// Fraction of `r` in `interval` with `inj(a_t u_r x) < eps^2`.
pub fn recurrence_fraction(
    x: &QuotientPoint,
    t: f64,
    interval: (f64, f64),
    eps: f64,
    cache: &LatticeCache,
    samples: usize,
    seed: u64,
) -> Estimate {
    let thr = eps * eps;
    par_mean(seed, labels::RECURRENCE, samples, |rng| {
        let r = rng.gen_range(interval.0..interval.1);
        (inj_value(&pushed(x, t, r), cache) < thr) as u8 as f64
    })
}

/// Fraction of `r` in `interval` with `a_t u_r x` in `X_eta`.
pub fn thick_fraction(
    x: &QuotientPoint,
    t: f64,
    interval: (f64, f64),
    eta: f64,
    cache: &LatticeCache,
    samples: usize,
    seed: u64,
) -> Estimate {
    par_mean(seed, labels::THICK, samples, |rng| {
        let r = rng.gen_range(interval.0..interval.1);
        (inj_value(&pushed(x, t, r), cache) >= eta) as u8 as f64
    })
}

/// Monte Carlo of `int inj(h x)^-alpha d nu^(n)(h)` where `nu` is the law of
/// `a_m u_r`, `r` uniform in `[0, 1]`.
pub fn inj_walk_average(
    x: &QuotientPoint,
    alpha: f64,
    m: f64,
    n: usize,
    cache: &LatticeCache,
    samples: usize,
    seed: u64,
) -> Estimate {
    let g = x.rep.group();
    let label = labels::INJ_WALK ^ ((n as u64) << 8);
    par_mean(seed, label, samples, |rng| {
        let mut y = *x;
        for _ in 0..n {
            let r: f64 = rng.gen();
            y = translate(&(a_elem(g, m) * u_elem(g, r)), &y);
        }
        inj_value(&y, cache).powf(-alpha)
    })
}
