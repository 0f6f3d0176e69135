//! Baseline cluster-count estimators driven by repeated K-Means++ runs.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kmeans::{kmeans_run, ClusteringResult, Init, KMeansConfig, DEFAULT_MAX_ITERATIONS};
use crate::metrics::{silhouette_score, sse_with, SseKind};
use crate::types::{CentroidSet, Dataset, MetricKind};

pub const DEFAULT_RUNS_PER_K: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMethod {
    Elbow,
    Silhouette,
}

impl ScanMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanMethod::Elbow => "elbow",
            ScanMethod::Silhouette => "silhouette",
        }
    }
}

impl fmt::Display for ScanMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScanMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "elbow" => Ok(ScanMethod::Elbow),
            "silhouette" => Ok(ScanMethod::Silhouette),
            other => Err(Error::Invalid(format!("unknown scan method '{other}'"))),
        }
    }
}

/// Rule for locating the elbow of a decreasing score curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KneeRule {
    /// Largest gap below the chord joining the end points, after scaling
    /// both axes to `[0, 1]`.
    #[default]
    ChordDistance,
    /// Largest discrete second difference `s[k-1] - 2 s[k] + s[k+1]`.
    MaxSecondDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knee {
    pub k: usize,
    /// False when the curve has no convex break, in which case `k` is the
    /// first interior point.
    pub confident: bool,
}

/// Result of scanning a range of K values.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub method: ScanMethod,
    pub k_values: Vec<usize>,
    /// Best score per K over the runs: lowest SSE or highest silhouette.
    pub scores: Vec<f64>,
    /// Mean score per K over the runs.
    pub mean_scores: Vec<f64>,
    pub chosen_k: usize,
    pub runs_per_k: usize,
    pub seed: u64,
    pub low_confidence: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    pub runs_per_k: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// SSE flavour logged by the elbow scan.
    pub sse_kind: SseKind,
    pub knee_rule: KneeRule,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            runs_per_k: DEFAULT_RUNS_PER_K,
            seed: 0,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            sse_kind: SseKind::Squared,
            knee_rule: KneeRule::default(),
        }
    }
}

/// Upper end of the scan when the caller gives none: `min(n - 1, 3⌈√n⌉)`.
pub fn default_k_hi(n: usize) -> usize {
    let root = (n as f64).sqrt().ceil() as usize;
    (3 * root).min(n.saturating_sub(1))
}

/// Seed for one (K, run) cell, independent of scheduling.
pub fn cell_seed(seed: u64, k: usize, run: usize) -> u64 {
    let mut z = seed
        ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (run as u64).wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn silhouette_scan(
    data: &Dataset,
    k_range: RangeInclusive<usize>,
    runs_per_k: usize,
    seed: u64,
) -> Result<ScanResult> {
    let options = ScanOptions {
        runs_per_k,
        seed,
        ..ScanOptions::default()
    };
    scan(data, ScanMethod::Silhouette, k_range, &options)
}

pub fn elbow_scan(
    data: &Dataset,
    k_range: RangeInclusive<usize>,
    runs_per_k: usize,
    seed: u64,
) -> Result<ScanResult> {
    let options = ScanOptions {
        runs_per_k,
        seed,
        ..ScanOptions::default()
    };
    scan(data, ScanMethod::Elbow, k_range, &options)
}

/// Runs `runs_per_k` K-Means++ clusterings for every K in `k_range` and
/// picks K by the method's rule.
pub fn scan(
    data: &Dataset,
    method: ScanMethod,
    k_range: RangeInclusive<usize>,
    options: &ScanOptions,
) -> Result<ScanResult> {
    let (k_lo, k_hi) = (*k_range.start(), *k_range.end());
    let n = data.n();
    if k_lo < 2 || k_lo > k_hi || k_hi > n.saturating_sub(1) {
        return Err(Error::domain(
            "k scan",
            format!("range [{k_lo}, {k_hi}] must satisfy 2 <= lo <= hi <= {}", n.saturating_sub(1)),
        ));
    }
    if method == ScanMethod::Elbow && k_hi - k_lo < 2 {
        return Err(Error::domain(
            "elbow scan",
            format!("range [{k_lo}, {k_hi}] needs at least 3 values"),
        ));
    }
    if options.runs_per_k == 0 {
        return Err(Error::Invalid("runs_per_k must be at least 1".into()));
    }

    let runs = options.runs_per_k;
    let cells: Vec<(usize, usize)> = (k_lo..=k_hi)
        .flat_map(|k| (0..runs).map(move |r| (k, r)))
        .collect();
    let metric = data.metric();
    let cell_scores: Vec<f64> = cells
        .par_iter()
        .map(|&(k, run)| {
            let config = KMeansConfig::new(k, metric, Init::PlusPlus { seed: cell_seed(options.seed, k, run) })
                .with_max_iterations(options.max_iterations);
            let result = kmeans_run(data, &config)?;
            match method {
                ScanMethod::Elbow => elbow_score(data, &result, options.sse_kind),
                ScanMethod::Silhouette => silhouette_score(data, &result.labels, metric),
            }
        })
        .collect::<Result<_>>()?;

    let k_values: Vec<usize> = (k_lo..=k_hi).collect();
    let mut scores = Vec::with_capacity(k_values.len());
    let mut mean_scores = Vec::with_capacity(k_values.len());
    for chunk in cell_scores.chunks(runs) {
        let best = match method {
            ScanMethod::Elbow => chunk.iter().copied().fold(f64::INFINITY, f64::min),
            ScanMethod::Silhouette => chunk.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        };
        scores.push(best);
        mean_scores.push(chunk.iter().sum::<f64>() / runs as f64);
    }

    let (chosen_k, low_confidence) = match method {
        ScanMethod::Elbow => {
            let knee = knee_detect_with(&k_values, &scores, options.knee_rule)?;
            (knee.k, !knee.confident)
        }
        ScanMethod::Silhouette => {
            let mut best = 0;
            for (i, &s) in scores.iter().enumerate() {
                if s > scores[best] {
                    best = i;
                }
            }
            (k_values[best], k_values.len() == 1)
        }
    };

    Ok(ScanResult {
        method,
        k_values,
        scores,
        mean_scores,
        chosen_k,
        runs_per_k: runs,
        seed: options.seed,
        low_confidence,
    })
}

/// SSE measured in the geometry the clustering ran in: raw rows for
/// Euclidean, unit rows against unit centroids for cosine.
fn elbow_score(data: &Dataset, result: &ClusteringResult, kind: SseKind) -> Result<f64> {
    match data.metric() {
        MetricKind::Euclidean => sse_with(data, &result.labels, &result.centroids, kind),
        MetricKind::Cosine => {
            let unit = Dataset::new(data.unit_rows(), MetricKind::Cosine)?;
            let mut centers = result.centroids.centers().to_owned();
            for mut z in centers.rows_mut() {
                let len = z.dot(&z).sqrt();
                z.mapv_inplace(|v| v / len);
            }
            sse_with(&unit, &result.labels, &CentroidSet::new(centers)?, kind)
        }
    }
}

/// Elbow of a decreasing score curve using [`KneeRule::ChordDistance`].
pub fn knee_detect(k_values: &[usize], scores: &[f64]) -> Result<usize> {
    knee_detect_with(k_values, scores, KneeRule::default()).map(|knee| knee.k)
}

pub fn knee_detect_with(k_values: &[usize], scores: &[f64], rule: KneeRule) -> Result<Knee> {
    if k_values.len() != scores.len() {
        return Err(Error::LengthMismatch {
            features: k_values.len(),
            labels: scores.len(),
        });
    }
    if k_values.len() < 3 {
        return Err(Error::domain(
            "knee_detect",
            format!("need at least 3 points, got {}", k_values.len()),
        ));
    }
    if k_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("k values must be strictly increasing".into()));
    }
    if let Some(bad) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::domain("knee_detect", format!("non-finite score {bad}")));
    }

    let last = scores.len() - 1;
    let strength: Vec<f64> = match rule {
        KneeRule::ChordDistance => {
            let (lo, hi) = scores
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
            let span = hi - lo;
            let x0 = k_values[0] as f64;
            let width = (k_values[last] - k_values[0]) as f64;
            let y = |i: usize| if span > 0.0 { (scores[i] - lo) / span } else { 0.0 };
            let (y0, y1) = (y(0), y(last));
            (1..last)
                .map(|i| {
                    let x = (k_values[i] as f64 - x0) / width;
                    y0 + (y1 - y0) * x - y(i)
                })
                .collect()
        }
        KneeRule::MaxSecondDifference => {
            let scale = scores.iter().fold(0.0f64, |m, s| m.max(s.abs()));
            (1..last)
                .map(|i| {
                    let d2 = scores[i - 1] - 2.0 * scores[i] + scores[i + 1];
                    if scale > 0.0 {
                        d2 / scale
                    } else {
                        0.0
                    }
                })
                .collect()
        }
    };

    // relative noise floor: exactly linear curves should not produce a knee
    const FLOOR: f64 = 1e-12;
    let mut best: Option<(usize, f64)> = None;
    for (i, &s) in strength.iter().enumerate() {
        if s > FLOOR && best.is_none_or(|(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    Ok(match best {
        Some((i, _)) => Knee {
            k: k_values[i + 1],
            confident: true,
        },
        None => Knee {
            k: k_values[1],
            confident: false,
        },
    })
}
