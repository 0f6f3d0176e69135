#![allow(dead_code)]

pub mod figures;

use discern::{Dataset, MetricKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random rows in `[-1, 1)^d`, never all zero.
pub fn random_rows(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| loop {
            let row: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            if row.iter().any(|&v| v != 0.0) {
                break row;
            }
        })
        .collect()
}

pub fn dataset(rows: &[Vec<f64>], metric: MetricKind) -> Dataset {
    Dataset::from_rows(rows, metric).unwrap()
}

/// Non-increasing within a relative tolerance.
pub fn is_monotone(trace: &[f64], rel_tol: f64) -> bool {
    trace
        .windows(2)
        .all(|w| w[1] <= w[0] + rel_tol * w[0].abs().max(f64::MIN_POSITIVE))
}
