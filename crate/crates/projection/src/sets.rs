//! Synthetic point sets in `r`, all inside `[0, 1)^3` unless scaled.

use horolab_lie::Sl2;

/// `n^3` grid points `(i, j, k) / n`.
pub fn uniform_grid(n: usize) -> Vec<Sl2> {
    let h = 1.0 / n as f64;
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out.push(Sl2::new(i as f64 * h, j as f64 * h, k as f64 * h));
            }
        }
    }
    out
}

/// `n` equally spaced points `(k / n)(1, 1, 1)` on the main diagonal.
pub fn diagonal_segment(n: usize) -> Vec<Sl2> {
    (0..n)
        .map(|k| {
            let x = k as f64 / n as f64;
            Sl2::new(x, x, x)
        })
        .collect()
}

/// Two-piece Cantor set on `[0, 1)`: `sum_i d_i (1 - ratio) ratio^i`,
/// `d_i in {0, 1}`, in lexicographic digit order.
pub fn cantor_1d(levels: u32, ratio: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    let mut scale = 1.0;
    for _ in 0..levels {
        let off = (1.0 - ratio) * scale;
        pts = pts.iter().flat_map(|&x| [x, x + off]).collect();
        scale *= ratio;
    }
    pts
}

/// Cartesian cube of [`cantor_1d`]: `8^levels` points of dimension
/// `3 ln 2 / ln(1 / ratio)`.
pub fn cantor_product(levels: u32, ratio: f64) -> Vec<Sl2> {
    let k = cantor_1d(levels, ratio);
    let mut out = Vec::with_capacity(k.len().pow(3));
    for &a in &k {
        for &b in &k {
            for &c in &k {
                out.push(Sl2::new(a, b, c));
            }
        }
    }
    out
}

/// Similarity dimension of [`cantor_product`].
pub fn cantor_product_dim(ratio: f64) -> f64 {
    3.0 * 2f64.ln() / (1.0 / ratio).ln()
}

/// `n` points `w0 + (k / n) len E12`. Their parabolas are vertical
/// translates of `Xi(w0)`, so every direction sees the same collisions.
pub fn fiber_line(w0: Sl2, n: usize, len: f64) -> Vec<Sl2> {
    (0..n).map(|k| w0 + Sl2::E12 * (len * k as f64 / n as f64)).collect()
}

pub fn scaled(set: &[Sl2], s: f64) -> Vec<Sl2> {
    set.iter().map(|w| *w * s).collect()
}

/// Radical inverse of `i` in base `base`.
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

/// First `n` points of the Halton sequence in bases 2, 3, 5, skipping index 0.
pub fn halton(n: usize) -> Vec<Sl2> {
    (1..=n as u64)
        .map(|i| Sl2::new(radical_inverse(i, 2), radical_inverse(i, 3), radical_inverse(i, 5)))
        .collect()
}
