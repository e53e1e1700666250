//! `int_0^1 ||a_m u_r w||^-alpha dr` and the calibration of `m_alpha`.

use crate::quad::{integrate, QuadResult};
use crate::MargulisError;
use horolab_lie::{LieVector, Sl2};
use horolab_mc::{rng_for, Rng};

/// Largest step time tried by `solve_m_alpha`.
pub const M_CAP: u32 = 200;
/// Relative slack on the `e^-1` target.
pub const CONTRACTION_SLACK: f64 = 1e-6;
/// Relative tolerance the adaptive rule aims for.
const TARGET_TOL: f64 = 1e-9;
const MAX_PIECES: usize = 100_000;
/// Accepted ratio of error estimate to value.
pub const QUAD_REL_ERR: f64 = 1e-6;

/// Fitted constant of the `C5 e^{-alpha_hat m} / (2 - 2^alpha)` bound, frozen
/// from `contraction_c5_fit` over the default calibration set, alpha in
/// {0.5, 0.75, 0.9}, m in 1..=60.
pub const C5_FIT: f64 = 1.28;

/// Number of nilpotent worst-case directions in every calibration set.
pub const FAMILY_SIZE: usize = 65;

const LABEL_CALIBRATION: u64 = 0x51;

/// One component of `Ad(a_m u_r) w` as `c0 + x (c1 + x c2)`, `x = r - center`.
/// Centering at the vertex of `xi_r` keeps evaluation free of cancellation
/// near its minimum, where the integrand peaks.
#[derive(Clone, Copy, Debug)]
struct Comp {
    center: f64,
    c: [f64; 3],
}

impl Comp {
    fn eval(&self, r: f64) -> f64 {
        let x = r - self.center;
        self.c[0] + x * (self.c[1] + x * self.c[2])
    }

    /// Coefficients in `r`.
    fn in_r(&self) -> [f64; 3] {
        let (v, [c0, c1, c2]) = (self.center, self.c);
        [c0 - c1 * v + c2 * v * v, c1 - 2.0 * c2 * v, c2]
    }
}

fn part_comps(w: &Sl2, m: f64) -> [Comp; 3] {
    let (em, emi) = (m.exp(), (-m).exp());
    let (a, b, c) = (w.a, w.b, w.c);
    if c != 0.0 {
        let v = -a / c;
        let xi0 = b + a * a / c;
        [
            Comp { center: v, c: [0.0, c, 0.0] },
            Comp { center: v, c: [em * xi0, 0.0, -em * c] },
            Comp { center: 0.0, c: [emi * c, 0.0, 0.0] },
        ]
    } else {
        let q = if a != 0.0 {
            Comp { center: b / (2.0 * a), c: [0.0, -2.0 * em * a, 0.0] }
        } else {
            Comp { center: 0.0, c: [em * b, 0.0, 0.0] }
        };
        [Comp { center: 0.0, c: [a, 0.0, 0.0] }, q, Comp { center: 0.0, c: [0.0; 3] }]
    }
}

fn comps(w: &LieVector, m: f64) -> Vec<Comp> {
    let mut p = part_comps(&w.h, m).to_vec();
    p.extend_from_slice(&part_comps(&w.r, m));
    p.retain(|q| q.c.iter().any(|&x| x != 0.0));
    p
}

fn max_abs(ps: &[Comp], r: f64) -> f64 {
    ps.iter().fold(0.0f64, |a, q| a.max(q.eval(r).abs()))
}

/// `||a_m u_r w||` in the coordinate max-norm.
pub fn pushed_norm(w: &LieVector, m: f64, r: f64) -> f64 {
    max_abs(&comps(w, m), r)
}

fn real_roots(q: [f64; 3], out: &mut Vec<f64>) {
    let [c, b, a] = q;
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return;
    }
    if a.abs() <= 1e-300 || a.abs() < 1e-15 * scale {
        if b != 0.0 {
            out.push(-c / b);
        }
        return;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return;
    }
    let s = disc.sqrt();
    let qq = -0.5 * (b + b.signum() * s);
    if qq != 0.0 {
        out.push(qq / a);
        out.push(c / qq);
    } else {
        out.push(0.0);
    }
}

/// Points of `[lo, hi]` where the max of the component moduli can kink:
/// zeros of each component and crossings `|p| = |q|` of every pair.
fn breakpoints(comps: &[Comp], lo: f64, hi: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    for c in comps {
        // Each component's own zero, located in its centered form.
        let mut local = Vec::new();
        real_roots(c.c, &mut local);
        roots.extend(local.into_iter().map(|x| x + c.center));
    }
    for (i, p) in comps.iter().enumerate() {
        for q in &comps[i + 1..] {
            // Same center: solve in the shared local variable.
            let (shift, pc, qc) = if p.center == q.center {
                (p.center, p.c, q.c)
            } else {
                (0.0, p.in_r(), q.in_r())
            };
            let mut local = Vec::new();
            real_roots([pc[0] - qc[0], pc[1] - qc[1], pc[2] - qc[2]], &mut local);
            real_roots([pc[0] + qc[0], pc[1] + qc[1], pc[2] + qc[2]], &mut local);
            roots.extend(local.into_iter().map(|x| x + shift));
        }
    }
    let mut b = vec![lo, hi];
    b.extend(roots.into_iter().filter(|r| r.is_finite() && *r > lo && *r < hi));
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// Adaptive quadrature of `int_0^1 ||a_m u_r w||^-alpha dr`.
///
/// The peak sits at the vertex `-w11/w21` of one part, where the integrand
/// rises to `(e^-m |w21|)^-alpha` over a width `e^-m`. The integral is taken
/// in `x = r - r*`, `r*` the center with the smallest norm, so features of
/// width far below the spacing of doubles near `r*` stay resolved.
pub fn contraction_integral(w: &LieVector, alpha: f64, m: f64) -> Result<QuadResult, MargulisError> {
    if w.norm() == 0.0 {
        return Err(MargulisError::ZeroVector);
    }
    let ps = comps(w, m);
    let r_star = ps
        .iter()
        .map(|c| c.center)
        .filter(|v| (0.0..=1.0).contains(v))
        .map(|v| (max_abs(&ps, v), v))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map_or(0.0, |p| p.1);
    let local: Vec<Comp> = ps.iter().map(|c| Comp { center: c.center - r_star, c: c.c }).collect();
    let br = breakpoints(&local, -r_star, 1.0 - r_star);
    let f = |x: f64| max_abs(&local, x).powf(-alpha);
    let res = integrate(f, &br, TARGET_TOL, MAX_PIECES);
    if !(res.value.is_finite() && res.error <= QUAD_REL_ERR * res.value.abs()) {
        return Err(MargulisError::QuadratureFail { value: res.value, error: res.error });
    }
    Ok(res)
}

/// `lhs * ||w||^alpha`; scale free.
pub fn contraction_ratio(w: &LieVector, alpha: f64, m: f64) -> Result<f64, MargulisError> {
    Ok(contraction_integral(w, alpha, m)?.value * w.norm().powf(alpha))
}

/// Outcome of `contraction_check`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ContractionReport {
    pub lhs: f64,
    /// `C5 e^{-alpha_hat m} / (2 - 2^alpha) ||w||^-alpha`, `alpha_hat = (1 - alpha) / 4`.
    pub bound: f64,
    pub pass: bool,
    /// `lhs ||w||^alpha`, to be compared with `e^-1` at `m = m_alpha`.
    pub ratio: f64,
    pub quad_error: f64,
    pub evaluations: usize,
}

pub fn alpha_hat(alpha: f64) -> f64 {
    (1.0 - alpha) / 4.0
}

pub fn contraction_bound(alpha: f64, m: f64, w_norm: f64, c5: f64) -> f64 {
    c5 * (-alpha_hat(alpha) * m).exp() / (2.0 - 2f64.powf(alpha)) * w_norm.powf(-alpha)
}

pub fn contraction_check(w: &LieVector, alpha: f64, m: f64) -> Result<ContractionReport, MargulisError> {
    check_alpha(alpha, 0.0)?;
    let q = contraction_integral(w, alpha, m)?;
    let n = w.norm();
    let bound = contraction_bound(alpha, m, n, C5_FIT);
    Ok(ContractionReport {
        lhs: q.value,
        bound,
        pass: q.value <= bound * (1.0 + CONTRACTION_SLACK),
        ratio: q.value * n.powf(alpha),
        quad_error: q.error,
        evaluations: q.evaluations,
    })
}

/// Whether the ratio meets the `m_alpha` target `e^-1 (1 + 1e-6)`.
pub fn contracts(ratio: f64) -> bool {
    ratio <= (-1.0f64).exp() * (1.0 + CONTRACTION_SLACK)
}

pub(crate) fn check_alpha(alpha: f64, lower: f64) -> Result<(), MargulisError> {
    if alpha > lower && alpha < 1.0 {
        Ok(())
    } else {
        Err(MargulisError::InvalidAlpha { alpha })
    }
}

/// Uniform draw on the unit sphere of the max-norm on `g`.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> LieVector {
    loop {
        let v: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
        let w = LieVector::from_array(&v);
        let n = w.norm();
        if n > 1e-3 {
            return w * (1.0 / n);
        }
    }
}

/// Nilpotent direction `[[-r0, -r0^2], [1, r0]]` in `r`: `xi_r` has a double
/// root at `r0`, the slowest contracting shape.
pub fn nilpotent_family(r0: f64) -> LieVector {
    let w = LieVector::from_r(Sl2::new(-r0, -r0 * r0, 1.0));
    w * (1.0 / w.norm())
}

/// Calibration directions: the nilpotent family on a grid of `r0` in
/// `[-0.25, 1.25]`, the three coordinate axes, then `samples` seeded draws.
pub fn calibration_set(samples: usize, seed: u64) -> Vec<LieVector> {
    let mut v: Vec<LieVector> = (0..FAMILY_SIZE)
        .map(|i| nilpotent_family(-0.25 + 1.5 * i as f64 / (FAMILY_SIZE - 1) as f64))
        .collect();
    v.extend([Sl2::E11, Sl2::E12, Sl2::E21].map(LieVector::from_r));
    let mut rng = rng_for(seed, LABEL_CALIBRATION, 0);
    v.extend((0..samples).map(|_| random_unit(&mut rng)));
    v
}

/// Smallest integer `m <= M_CAP` with every calibration ratio at most
/// `e^-1 (1 + 1e-6)`.
pub fn solve_m_alpha(alpha: f64, samples: usize, seed: u64) -> Result<u32, MargulisError> {
    check_alpha(alpha, 1.0 / 3.0)?;
    let set = calibration_set(samples, seed);
    solve_on_set(alpha, &set)
}

pub fn solve_on_set(alpha: f64, set: &[LieVector]) -> Result<u32, MargulisError> {
    // Track the previous worst direction first; it usually decides the step.
    let mut worst = 0usize;
    'm: for m in 1..=M_CAP {
        let mf = m as f64;
        if !contracts(contraction_ratio(&set[worst], alpha, mf)?) {
            continue;
        }
        for (i, w) in set.iter().enumerate() {
            if !contracts(contraction_ratio(w, alpha, mf)?) {
                worst = i;
                continue 'm;
            }
        }
        return Ok(m);
    }
    Err(MargulisError::NotFound { cap: M_CAP })
}

/// Smallest `C5` making `lhs <= C5 e^{-alpha_hat m}/(2 - 2^alpha) ||w||^-alpha`
/// over the given directions, alphas and step times.
pub fn contraction_c5_fit(set: &[LieVector], alphas: &[f64], ms: &[f64]) -> Result<f64, MargulisError> {
    let mut c = 0.0f64;
    for &a in alphas {
        for &m in ms {
            for w in set {
                let r = contraction_ratio(w, a, m)?;
                c = c.max(r / contraction_bound(a, m, 1.0, 1.0));
            }
        }
    }
    Ok(c)
}
