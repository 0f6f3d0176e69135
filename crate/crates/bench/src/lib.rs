//! Synthetic inputs shared by the benchmarks.

use discern::{Dataset, MetricKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` points in `d` dimensions drawn around `k` well separated centers.
pub fn blobs(n: usize, d: usize, k: usize, metric: MetricKind, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..d).map(|_| rng.random_range(-10.0..10.0)).collect())
        .collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            centers[i % k]
                .iter()
                .map(|&c| c + rng.random_range(-1.0..1.0))
                .collect()
        })
        .collect();
    Dataset::from_rows(&rows, metric).expect("synthetic rows are finite and nonzero")
}
