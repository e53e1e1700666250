//! Deterministic Monte Carlo plumbing.
//!
//! All randomness flows from one `u64` seed. A computation is split into
//! fixed-size blocks; block `k` of stream `label` draws from ChaCha8 stream
//! `(label << 40) | k`. Block partials are collected in index order and
//! folded sequentially, so the result does not depend on how rayon schedules
//! the blocks or how many threads it has.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use rand::Rng;
pub use rand_chacha::ChaCha8Rng as McRng;

/// Samples per block. Part of the reproducibility contract: changing it
/// changes every Monte Carlo number.
pub const BLOCK: usize = 256;

/// RNG for block `block` of stream `label`.
pub fn rng_for(seed: u64, label: u64, block: u64) -> ChaCha8Rng {
    assert!(block < (1u64 << 40), "block index overflows stream layout");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((label << 40) | block);
    rng
}

/// Mean with standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

impl Estimate {
    /// Relative standard error, `inf` when the mean vanishes.
    pub fn rel_err(&self) -> f64 {
        if self.mean == 0.0 {
            if self.stderr == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.stderr / self.mean.abs()
        }
    }
}

#[derive(Clone, Copy, Default)]
struct Partial {
    sum: f64,
    sumsq: f64,
    n: usize,
}

/// Mean of `f` over `n` samples, block-parallel and partition independent.
pub fn par_mean<F>(seed: u64, label: u64, n: usize, f: F) -> Estimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let means = par_means(seed, label, n, 1, |rng, out| out[0] = f(rng));
    means[0]
}

/// Joint means of `k` statistics evaluated on the same draws.
pub fn par_means<F>(seed: u64, label: u64, n: usize, k: usize, f: F) -> Vec<Estimate>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    let blocks = n.div_ceil(BLOCK);
    let partials: Vec<Vec<Partial>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng_for(seed, label, b as u64);
            let len = BLOCK.min(n - b * BLOCK);
            let mut acc = vec![Partial::default(); k];
            let mut buf = vec![0.0; k];
            for _ in 0..len {
                buf.iter_mut().for_each(|x| *x = 0.0);
                f(&mut rng, &mut buf);
                for (a, &x) in acc.iter_mut().zip(&buf) {
                    a.sum += x;
                    a.sumsq += x * x;
                    a.n += 1;
                }
            }
            acc
        })
        .collect();
    let mut tot = vec![Partial::default(); k];
    for p in &partials {
        for (t, q) in tot.iter_mut().zip(p) {
            t.sum += q.sum;
            t.sumsq += q.sumsq;
            t.n += q.n;
        }
    }
    tot.iter().map(finish).collect()
}

fn finish(p: &Partial) -> Estimate {
    if p.n == 0 {
        return Estimate { mean: 0.0, stderr: 0.0, n: 0 };
    }
    let n = p.n as f64;
    let mean = p.sum / n;
    let var = if p.n > 1 {
        ((p.sumsq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Estimate { mean, stderr: (var / n).sqrt(), n: p.n }
}

/// Deterministic parallel map over `n` seeded draws, in draw order.
pub fn par_draws<T, F>(seed: u64, label: u64, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let blocks = n.div_ceil(BLOCK);
    let nested: Vec<Vec<T>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng_for(seed, label, b as u64);
            let len = BLOCK.min(n - b * BLOCK);
            (0..len).map(|_| f(&mut rng)).collect()
        })
        .collect();
    nested.into_iter().flatten().collect()
}

/// Order-preserving parallel map.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Run `f` on a dedicated pool with `threads` workers (0 = rayon default).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(f)
}
