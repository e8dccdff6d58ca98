#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use tailindex::{CensoredSample, TailStats};

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn unit(r: &mut ChaCha20Rng) -> f64 {
    loop {
        let u: f64 = r.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Standard Pareto(α) on [1, ∞).
pub fn pareto(n: usize, alpha: f64, seed: u64) -> CensoredSample {
    let mut r = rng(seed);
    CensoredSample::complete((0..n).map(|_| unit(&mut r).powf(-1.0 / alpha)).collect()).unwrap()
}

/// Pareto(α) censored by an independent Pareto(β).
pub fn censored_pareto(n: usize, alpha: f64, beta: f64, seed: u64) -> CensoredSample {
    let mut r = rng(seed);
    let (mut v, mut d) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let x = unit(&mut r).powf(-1.0 / alpha);
        let y = unit(&mut r).powf(-1.0 / beta);
        v.push(x.min(y));
        d.push(x <= y);
    }
    CensoredSample::new(v, d).unwrap()
}

pub fn tail_of(sample: &CensoredSample, k: usize) -> TailStats {
    sample.ordered().tail(k).unwrap()
}
