//! Lloyd-style K-Means with random, K-Means++ and caller-supplied seeding.
//!
//! Under [`MetricKind::Cosine`] points go to the centroid with the largest
//! cosine similarity. The update step is always the plain member mean; with
//! `spherical` enabled (the default for cosine) the mean is then scaled to
//! unit length. Scaling does not change any cosine, so both variants give
//! the same labels.

use ndarray::Array2;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::types::{dot, norm, squared_distance, CentroidSet, Dataset, LabelVector, MetricKind};

pub const DEFAULT_MAX_ITERATIONS: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    /// `k` distinct data rows drawn uniformly.
    Random { seed: u64 },
    /// D²-weighted seeding.
    PlusPlus { seed: u64 },
    Provided(CentroidSet),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansConfig {
    pub k: usize,
    pub max_iterations: usize,
    pub metric: MetricKind,
    pub init: Init,
    /// Stop once the relative objective improvement falls to this value or
    /// below. Zero disables the check; the run then stops only on stable
    /// labels or after `max_iterations`.
    pub convergence_tol: f64,
    /// Normalize centroids after each update. Only meaningful for cosine.
    pub spherical: bool,
}

impl KMeansConfig {
    pub fn new(k: usize, metric: MetricKind, init: Init) -> Self {
        KMeansConfig {
            k,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            metric,
            init,
            convergence_tol: 0.0,
            spherical: metric == MetricKind::Cosine,
        }
    }

    pub fn with_max_iterations(mut self, t: usize) -> Self {
        self.max_iterations = t;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.convergence_tol = tol;
        self
    }

    pub fn with_spherical(mut self, spherical: bool) -> Self {
        self.spherical = spherical;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub labels: LabelVector,
    pub centroids: CentroidSet,
    /// Objective after each completed update; see [`lloyd_objective`].
    pub sse_trace: Vec<f64>,
    pub iterations_run: usize,
    pub converged: bool,
}

/// Labels each point with its nearest centroid; ties go to the lower index.
pub fn assign(data: &Dataset, centroids: &CentroidSet, metric: MetricKind) -> Result<LabelVector> {
    if centroids.dim() != data.dim() {
        return Err(Error::DimensionMismatch {
            what: "centroid dimension",
            expected: data.dim(),
            actual: centroids.dim(),
        });
    }
    let k = centroids.k();
    let labels: Vec<usize> = match metric {
        MetricKind::Euclidean => data
            .rows()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|x| nearest_euclidean(x, centroids))
            .collect(),
        MetricKind::Cosine => {
            let units = unit_centers(centroids)?;
            data.rows()
                .collect::<Vec<_>>()
                .par_iter()
                .map(|x| {
                    let len = norm(x);
                    let mut best = (0, f64::NEG_INFINITY);
                    for (c, z) in units.iter().enumerate() {
                        let sim = dot(x, z) / len;
                        if sim > best.1 {
                            best = (c, sim);
                        }
                    }
                    best.0
                })
                .collect()
        }
    };
    LabelVector::new(labels, k)
}

fn nearest_euclidean(x: &[f64], centroids: &CentroidSet) -> usize {
    let mut best = (0, f64::INFINITY);
    for (c, z) in centroids.iter().enumerate() {
        let d = squared_distance(x, z);
        if d < best.1 {
            best = (c, d);
        }
    }
    best.0
}

fn unit_centers(centroids: &CentroidSet) -> Result<Vec<Vec<f64>>> {
    centroids
        .iter()
        .enumerate()
        .map(|(c, z)| {
            let len = norm(z);
            if len == 0.0 {
                Err(Error::domain(
                    "assign",
                    format!("centroid {c} has zero norm; cosine similarity is undefined"),
                ))
            } else {
                Ok(z.iter().map(|v| v / len).collect())
            }
        })
        .collect()
}

/// Cluster means, normalized under cosine. Empty clusters are reseeded.
pub fn update_centroids(
    data: &Dataset,
    labels: &LabelVector,
    k: usize,
    metric: MetricKind,
) -> Result<CentroidSet> {
    update_centroids_with(data, labels, k, metric, metric == MetricKind::Cosine)
}

/// Like [`update_centroids`], with explicit control over normalization.
///
/// A cluster with no members takes the point that lies farthest from its
/// own centroid (each point used at most once), so `k` never shrinks.
pub fn update_centroids_with(
    data: &Dataset,
    labels: &LabelVector,
    k: usize,
    metric: MetricKind,
    spherical: bool,
) -> Result<CentroidSet> {
    if labels.len() != data.n() {
        return Err(Error::LengthMismatch {
            features: data.n(),
            labels: labels.len(),
        });
    }
    if labels.k() > k {
        return Err(Error::Invalid(format!(
            "labels use {} clusters but k = {k}",
            labels.k()
        )));
    }
    let d = data.dim();
    let spherical = spherical && metric == MetricKind::Cosine;
    let mut sums = vec![0.0; k * d];
    let mut counts = vec![0usize; k];
    for (x, &l) in data.rows().zip(labels.as_slice()) {
        counts[l] += 1;
        let acc = &mut sums[l * d..(l + 1) * d];
        for (a, v) in acc.iter_mut().zip(x) {
            *a += v;
        }
    }

    let mut empty = Vec::new();
    for c in 0..k {
        let z = &mut sums[c * d..(c + 1) * d];
        if counts[c] == 0 {
            empty.push(c);
            continue;
        }
        let inv = 1.0 / counts[c] as f64;
        z.iter_mut().for_each(|v| *v *= inv);
        if metric == MetricKind::Cosine {
            // a zero mean has no direction, so treat the cluster as empty
            let len = norm(z);
            if len == 0.0 {
                empty.push(c);
            } else if spherical {
                z.iter_mut().for_each(|v| *v /= len);
            }
        }
    }

    if !empty.is_empty() {
        let mut used = vec![false; data.n()];
        for &c in &empty {
            let mut far = None::<(usize, f64)>;
            for (i, (x, &l)) in data.rows().zip(labels.as_slice()).enumerate() {
                if used[i] || empty.contains(&l) {
                    continue;
                }
                let z = &sums[l * d..(l + 1) * d];
                let gap = dissimilarity(x, z, metric);
                if far.is_none_or(|(_, g)| gap > g) {
                    far = Some((i, gap));
                }
            }
            // every point sits in an empty cluster only when k > n
            let (i, _) = far.ok_or_else(|| {
                Error::domain("update_centroids", "no point available to reseed an empty cluster")
            })?;
            used[i] = true;
            let x = data.row(i);
            let z = &mut sums[c * d..(c + 1) * d];
            z.copy_from_slice(x);
            if spherical {
                let len = norm(x);
                z.iter_mut().for_each(|v| *v /= len);
            }
        }
    }

    CentroidSet::new(Array2::from_shape_vec((k, d), sums).expect("k*d buffer"))
}

fn dissimilarity(x: &[f64], z: &[f64], metric: MetricKind) -> f64 {
    match metric {
        MetricKind::Euclidean => squared_distance(x, z).sqrt(),
        MetricKind::Cosine => {
            let (nx, nz) = (norm(x), norm(z));
            if nx == 0.0 || nz == 0.0 {
                1.0
            } else {
                1.0 - (dot(x, z) / (nx * nz)).clamp(-1.0, 1.0)
            }
        }
    }
}

/// The quantity Lloyd iterations decrease: squared Euclidean error, or for
/// cosine `Σ ‖x‖ (1 − cos(x, z))`, which both the nearest-direction
/// assignment and the mean update minimize.
pub fn lloyd_objective(
    data: &Dataset,
    labels: &LabelVector,
    centroids: &CentroidSet,
    metric: MetricKind,
) -> f64 {
    match metric {
        MetricKind::Euclidean => data
            .rows()
            .zip(labels.as_slice())
            .map(|(x, &l)| squared_distance(x, centroids.center(l)))
            .sum(),
        MetricKind::Cosine => {
            let units: Vec<Vec<f64>> = centroids
                .iter()
                .map(|z| {
                    let len = norm(z);
                    z.iter().map(|v| if len > 0.0 { v / len } else { 0.0 }).collect()
                })
                .collect();
            data.rows()
                .zip(labels.as_slice())
                .map(|(x, &l)| norm(x) - dot(x, &units[l]))
                .sum()
        }
    }
}

fn check_k(data: &Dataset, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::domain("k-means", format!("k must be >= 2, got {k}")));
    }
    if k > data.n() {
        return Err(Error::domain(
            "k-means",
            format!("k = {k} exceeds the number of points ({})", data.n()),
        ));
    }
    Ok(())
}

/// `k` distinct rows sampled uniformly without replacement.
pub fn random_init(data: &Dataset, k: usize, seed: u64) -> Result<CentroidSet> {
    check_k(data, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = rand::seq::index::sample(&mut rng, data.n(), k).into_vec();
    CentroidSet::from_data_rows(data, &picked)
}

/// K-Means++ seeding. The first row is uniform; each further row is drawn
/// with probability proportional to its squared distance from the nearest
/// chosen row. Cosine data is seeded on unit-normalized rows.
pub fn kmeanspp_init(data: &Dataset, k: usize, seed: u64) -> Result<CentroidSet> {
    check_k(data, k)?;
    let n = data.n();
    let unit;
    let rows: Vec<&[f64]> = match data.metric() {
        MetricKind::Euclidean => data.rows().collect(),
        MetricKind::Cosine => {
            unit = data.unit_rows();
            unit.as_slice()
                .expect("standard layout")
                .chunks_exact(data.dim())
                .collect()
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = vec![rng.random_range(0..n)];
    let mut is_chosen = vec![false; n];
    is_chosen[chosen[0]] = true;
    let mut weights: Vec<f64> = rows.iter().map(|x| squared_distance(x, rows[chosen[0]])).collect();

    while chosen.len() < k {
        for (w, &c) in weights.iter_mut().zip(&is_chosen) {
            if c {
                *w = 0.0;
            }
        }
        let next = match WeightedIndex::new(&weights) {
            Ok(dist) => dist.sample(&mut rng),
            // every remaining row duplicates a chosen one
            Err(_) => {
                let free: Vec<usize> = (0..n).filter(|&i| !is_chosen[i]).collect();
                free[rng.random_range(0..free.len())]
            }
        };
        chosen.push(next);
        is_chosen[next] = true;
        for (w, x) in weights.iter_mut().zip(&rows) {
            *w = w.min(squared_distance(x, rows[next]));
        }
    }
    CentroidSet::from_data_rows(data, &chosen)
}

/// Alternates assignment and update until labels stop changing, the
/// tolerance is met or `max_iterations` updates have run.
pub fn kmeans_run(data: &Dataset, config: &KMeansConfig) -> Result<ClusteringResult> {
    let k = config.k;
    check_k(data, k)?;
    if config.max_iterations == 0 {
        return Err(Error::Invalid("max_iterations must be at least 1".into()));
    }
    if !(config.convergence_tol >= 0.0 && config.convergence_tol.is_finite()) {
        return Err(Error::Invalid(format!(
            "convergence tolerance must be finite and >= 0, got {}",
            config.convergence_tol
        )));
    }
    let metric = config.metric;
    let mut centroids = match &config.init {
        Init::Random { seed } => random_init(data, k, *seed)?,
        Init::PlusPlus { seed } => kmeanspp_init(data, k, *seed)?,
        Init::Provided(z) => {
            if z.k() != k {
                return Err(Error::DimensionMismatch {
                    what: "provided centroid count",
                    expected: k,
                    actual: z.k(),
                });
            }
            if z.dim() != data.dim() {
                return Err(Error::DimensionMismatch {
                    what: "provided centroid dimension",
                    expected: data.dim(),
                    actual: z.dim(),
                });
            }
            z.clone()
        }
    };

    let mut labels: Option<LabelVector> = None;
    let mut trace = Vec::new();
    let mut converged = false;
    for _ in 0..config.max_iterations {
        let next = assign(data, &centroids, metric)?;
        if labels.as_ref() == Some(&next) {
            converged = true;
            break;
        }
        centroids = update_centroids_with(data, &next, k, metric, config.spherical)?;
        let objective = lloyd_objective(data, &next, &centroids, metric);
        labels = Some(next);
        let previous = trace.last().copied();
        trace.push(objective);
        if let Some(prev) = previous {
            if config.convergence_tol > 0.0 && prev - objective <= config.convergence_tol * prev {
                converged = true;
                break;
            }
        }
    }
    let labels = labels.expect("at least one iteration runs");
    Ok(ClusteringResult {
        labels,
        centroids,
        iterations_run: trace.len(),
        sse_trace: trace,
        converged,
    })
}
