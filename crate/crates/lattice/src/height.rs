use crate::cache::LatticeCache;
use crate::elem::LatticeKind;
use crate::reduce::QuotientPoint;
use crate::LatticeError;
use horolab_lie::{GroupElement, M2c, C64};

/// Upper cap on the injectivity radius.
pub const INJ_CAP: f64 = 0.01;

/// Scale turning the smallest conjugated displacement into a box radius.
/// With `b1, b2` in the box of radius `10 beta` one has
/// `||b2^-1 b1 - I|| <= 50 beta` roughly, so `1/64` keeps the orbit map
/// injective on that box.
pub const INJ_SCALE: f64 = 1.0 / 64.0;

pub const OMEGA_FLOOR: f64 = 2.0;

/// `2 sqrt(2)`: the factor in `g v = -2 sqrt(2) (g1 E12, 0) ^ (0, g2 E12)`.
const WEDGE_SCALE: f64 = 2.0 * std::f64::consts::SQRT_2;

/// `max ||g_f|| ||g_f^-1||` over factors (max-entry norms).
fn distortion(g: &GroupElement) -> f64 {
    let gi = g.inv();
    g.factors()
        .iter()
        .zip(gi.factors().iter())
        .map(|(a, b)| {
            let na = a.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            let nb = b.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            na * nb
        })
        .fold(0.0, f64::max)
}

/// Smallest `dist_center(g gamma g^-1)` over non-central cached `gamma`, with
/// the index of the minimizer.
pub fn min_displacement(g: &GroupElement, cache: &LatticeCache) -> (f64, Option<usize>) {
    let gi = g.inv();
    let k4 = 4.0 * distortion(g);
    let mut best = f64::INFINITY;
    let mut arg = None;
    for &(key, i) in cache.by_key() {
        if key == 0.0 {
            continue;
        }
        // ||g X g^-1|| >= ||X|| / (4 ||g|| ||g^-1||).
        if key / k4 >= best {
            break;
        }
        let d = (g * cache.float(i as usize) * gi).dist_center();
        if d < best {
            best = d;
            arg = Some(i as usize);
        }
    }
    (best, arg)
}

/// Injectivity-radius proxy `min(0.01, c * min ||g gamma g^-1 -+ I||)`.
///
/// Errors with `CacheTooSmall` (carrying the value) when the minimizing
/// element lies on the boundary shell of the cache.
pub fn injectivity_radius(x: &QuotientPoint, cache: &LatticeCache) -> Result<f64, LatticeError> {
    let (d, arg) = min_displacement(&x.rep, cache);
    let value = (INJ_SCALE * d).min(INJ_CAP);
    match arg {
        Some(i) if cache.in_shell(i) => Err(LatticeError::CacheTooSmall { value }),
        _ => Ok(value),
    }
}

/// `injectivity_radius` ignoring the shell flag.
pub fn inj_value(x: &QuotientPoint, cache: &LatticeCache) -> f64 {
    injectivity_radius(x, cache).unwrap_or_else(|e| e.value().expect("flagged value"))
}

/// Height function: `max(2, max_gamma ||Ad(g gamma) E12||^-1)` with
/// `||Ad(m) E12|| = ||m e1||^2` in the max norm; the maximum over factors for
/// the product lattice; the wedge form `2 sqrt 2 ||g1 gamma e1||^2 ||g2 gamma' e1||^2`
/// for the irreducible lattice.
pub fn omega(x: &QuotientPoint, cache: &LatticeCache) -> Result<f64, LatticeError> {
    let kind = cache.kind();
    let fs = x.rep.factors();
    let inv_norms: Vec<f64> = x
        .rep
        .inv()
        .factors()
        .iter()
        .map(|m| m.iter().fold(0.0f64, |a, z| a.max(z.norm())))
        .collect();
    let image = |m: &M2c, v0: C64, v1: C64| {
        let a = m[(0, 0)] * v0 + m[(0, 1)] * v1;
        let b = m[(1, 0)] * v0 + m[(1, 1)] * v1;
        a.norm().max(b.norm())
    };
    // ||g v|| >= ||v|| / (2 ||g^-1||).
    let bound = match kind {
        LatticeKind::ZSqrt2 => 4.0 * inv_norms[0] * inv_norms[1],
        _ => 2.0 * inv_norms.iter().cloned().fold(0.0, f64::max),
    };
    let mut best_norm = f64::INFINITY;
    let mut arg_shell = false;
    for cv in &cache.cusp_vecs {
        let lower = (cv.key / bound).powi(2) * if kind == LatticeKind::ZSqrt2 { WEDGE_SCALE } else { 1.0 };
        if lower >= best_norm {
            break;
        }
        let n = match kind {
            LatticeKind::ZSqrt2 => {
                let n1 = image(&fs[0], cv.v[0], cv.v[1]);
                let v2 = [C64::from(cv.v2[0]), C64::from(cv.v2[1])];
                let n2 = image(&fs[1], v2[0], v2[1]);
                WEDGE_SCALE * (n1 * n2).powi(2)
            }
            _ => image(&fs[cv.factor], cv.v[0], cv.v[1]).powi(2),
        };
        if n < best_norm {
            best_norm = n;
            arg_shell = cv.shell;
        }
    }
    let value = (1.0 / best_norm).max(OMEGA_FLOOR);
    if arg_shell && 1.0 / best_norm > OMEGA_FLOOR {
        Err(LatticeError::CacheTooSmall { value })
    } else {
        Ok(value)
    }
}

pub fn omega_value(x: &QuotientPoint, cache: &LatticeCache) -> f64 {
    omega(x, cache).unwrap_or_else(|e| e.value().expect("flagged value"))
}
