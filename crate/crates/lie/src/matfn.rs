//! 2x2 exponential and logarithm.
//!
//! `exp` is nalgebra's scaling-and-squaring Padé. `log` is inverse
//! scaling-and-squaring: closed-form principal square roots until the matrix
//! is within 0.25 of the identity, then the series
//! `log A = 2 atanh(Z)`, `Z = (A - I)(A + I)^-1`, rescaled by `2^k`.

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;

pub type M2c = Matrix2<C64>;
pub type M2r = Matrix2<f64>;

pub fn exp_c(x: &M2c) -> M2c {
    x.exp()
}

pub fn exp_r(x: &M2r) -> M2r {
    x.exp()
}

fn max_abs(m: &M2c) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Principal square root `(A + sI)/sqrt(tr A + 2s)`, `s = sqrt(det A)`.
fn sqrt2(a: &M2c) -> M2c {
    let s = a.determinant().sqrt();
    let t = (a.trace() + s * 2.0).sqrt();
    (a + M2c::identity() * s) / t
}

/// Principal logarithm; requires no eigenvalue on the closed negative axis.
pub fn log_c(a: &M2c) -> M2c {
    let id = M2c::identity();
    let mut x = *a;
    let mut k = 0;
    while max_abs(&(x - id)) > 0.25 && k < 64 {
        x = sqrt2(&x);
        k += 1;
    }
    let inv = (x + id).try_inverse().expect("A + I invertible after square roots");
    let z = (x - id) * inv;
    let z2 = z * z;
    let mut term = z;
    let mut acc = z;
    for j in 1..60 {
        term *= z2;
        let add = term / C64::from(2.0 * j as f64 + 1.0);
        acc += add;
        if max_abs(&add) < 1e-18 {
            break;
        }
    }
    acc * C64::from(2.0 * (1u64 << k) as f64)
}

/// Real principal logarithm.
pub fn log_r(a: &M2r) -> M2r {
    let c = a.map(|v| C64::new(v, 0.0));
    log_c(&c).map(|z| z.re)
}
