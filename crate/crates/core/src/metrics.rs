//! Internal (silhouette, SSE) and external (ARI, purity) clustering scores.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::types::{dot, norm, squared_distance, CentroidSet, Dataset, LabelVector, MetricKind};

/// Cluster-by-class co-occurrence counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    total: u64,
}

impl ContingencyTable {
    pub fn new(predicted: &LabelVector, truth: &LabelVector) -> Result<Self> {
        if predicted.len() != truth.len() {
            return Err(Error::LengthMismatch {
                features: predicted.len(),
                labels: truth.len(),
            });
        }
        let (k, t) = (predicted.k(), truth.k());
        let mut counts = vec![vec![0u64; t]; k];
        for (&p, &c) in predicted.as_slice().iter().zip(truth.as_slice()) {
            counts[p][c] += 1;
        }
        let row_sums: Vec<u64> = counts.iter().map(|r| r.iter().sum()).collect();
        let col_sums: Vec<u64> = (0..t).map(|j| counts.iter().map(|r| r[j]).sum()).collect();
        Ok(ContingencyTable {
            total: row_sums.iter().sum(),
            counts,
            row_sums,
            col_sums,
        })
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

fn pairs(n: u64) -> f64 {
    (n as f64) * (n.saturating_sub(1) as f64) / 2.0
}

/// Rand index adjusted for chance. Returns 1 for identical partitions; when
/// the expected-index denominator vanishes, returns 1 if the partitions
/// coincide up to renaming and 0 otherwise.
pub fn adjusted_rand_index(predicted: &LabelVector, truth: &LabelVector) -> Result<f64> {
    let table = ContingencyTable::new(predicted, truth)?;
    let index: f64 = table.counts.iter().flatten().map(|&c| pairs(c)).sum();
    let rows: f64 = table.row_sums.iter().map(|&a| pairs(a)).sum();
    let cols: f64 = table.col_sums.iter().map(|&b| pairs(b)).sum();
    let expected = rows * cols / pairs(table.total);
    let max_index = 0.5 * (rows + cols);
    let denominator = max_index - expected;
    if denominator == 0.0 || !denominator.is_finite() {
        return Ok(if same_partition(predicted, truth) { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / denominator)
}

fn same_partition(a: &LabelVector, b: &LabelVector) -> bool {
    let mut forward = vec![None; a.k()];
    let mut backward = vec![None; b.k()];
    for (&x, &y) in a.as_slice().iter().zip(b.as_slice()) {
        if *forward[x].get_or_insert(y) != y || *backward[y].get_or_insert(x) != x {
            return false;
        }
    }
    true
}

/// Fraction of points belonging to the majority class of their cluster.
pub fn purity(predicted: &LabelVector, truth: &LabelVector) -> Result<f64> {
    let table = ContingencyTable::new(predicted, truth)?;
    if table.total == 0 {
        return Err(Error::Invalid("purity of an empty labeling".into()));
    }
    let majority: u64 = table
        .counts
        .iter()
        .map(|row| row.iter().copied().max().unwrap_or(0))
        .sum();
    Ok(majority as f64 / table.total as f64)
}

fn pair_distance(x: &[f64], y: &[f64], metric: MetricKind) -> f64 {
    match metric {
        MetricKind::Euclidean => squared_distance(x, y).sqrt(),
        MetricKind::Cosine => 1.0 - (dot(x, y) / (norm(x) * norm(y))).clamp(-1.0, 1.0),
    }
}

/// Mean silhouette coefficient. Members of singleton clusters score 0.
/// Distances are Euclidean, or `1 - cos` under the cosine metric.
pub fn silhouette_score(data: &Dataset, labels: &LabelVector, metric: MetricKind) -> Result<f64> {
    if labels.len() != data.n() {
        return Err(Error::LengthMismatch {
            features: data.n(),
            labels: labels.len(),
        });
    }
    let sizes = labels.cluster_sizes();
    if sizes.iter().filter(|&&s| s > 0).count() < 2 {
        return Err(Error::domain(
            "silhouette",
            "at least two non-empty clusters are required",
        ));
    }
    let rows: Vec<&[f64]> = data.rows().collect();
    let assignments = labels.as_slice();
    let scores: Vec<f64> = (0..rows.len())
        .into_par_iter()
        .map(|i| {
            let own = assignments[i];
            if sizes[own] <= 1 {
                return 0.0;
            }
            let mut totals = vec![0.0; sizes.len()];
            for (j, x) in rows.iter().enumerate() {
                if j != i {
                    totals[assignments[j]] += pair_distance(rows[i], x, metric);
                }
            }
            let a = totals[own] / (sizes[own] - 1) as f64;
            let b = totals
                .iter()
                .zip(&sizes)
                .enumerate()
                .filter(|&(c, (_, &s))| c != own && s > 0)
                .map(|(_, (t, &s))| t / s as f64)
                .fold(f64::INFINITY, f64::min);
            let denom = a.max(b);
            if denom == 0.0 {
                0.0
            } else {
                (b - a) / denom
            }
        })
        .collect();
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}

/// How member-to-centroid errors are aggregated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SseKind {
    /// Sum of Euclidean norms `Σ ‖x − z‖`.
    #[default]
    Norm,
    /// Sum of squared norms `Σ ‖x − z‖²`, the quantity K-Means minimizes.
    Squared,
}

/// `Σ_clusters Σ_members ‖x − z‖`.
pub fn sse(data: &Dataset, labels: &LabelVector, centroids: &CentroidSet) -> Result<f64> {
    sse_with(data, labels, centroids, SseKind::Norm)
}

pub fn sse_with(
    data: &Dataset,
    labels: &LabelVector,
    centroids: &CentroidSet,
    kind: SseKind,
) -> Result<f64> {
    if labels.len() != data.n() {
        return Err(Error::LengthMismatch {
            features: data.n(),
            labels: labels.len(),
        });
    }
    if centroids.dim() != data.dim() {
        return Err(Error::DimensionMismatch {
            what: "centroid dimension",
            expected: data.dim(),
            actual: centroids.dim(),
        });
    }
    if labels.k() > centroids.k() {
        return Err(Error::DimensionMismatch {
            what: "centroid count",
            expected: labels.k(),
            actual: centroids.k(),
        });
    }
    Ok(data
        .rows()
        .zip(labels.as_slice())
        .map(|(x, &l)| {
            let sq = squared_distance(x, centroids.center(l));
            match kind {
                SseKind::Norm => sq.sqrt(),
                SseKind::Squared => sq,
            }
        })
        .sum())
}

/// Scores for one clustering. External scores need ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub k: usize,
    pub silhouette: Option<f64>,
    pub sse: f64,
    pub ari: Option<f64>,
    pub purity: Option<f64>,
}

impl EvaluationReport {
    /// Evaluates `labels`/`centroids` on `data`, using the dataset's ground
    /// truth for ARI and purity when available. Silhouette is omitted when
    /// fewer than two clusters are occupied. Under cosine the centroids may
    /// be unit length, so SSE is measured against the members' means.
    pub fn evaluate(
        data: &Dataset,
        labels: &LabelVector,
        centroids: &CentroidSet,
        metric: MetricKind,
    ) -> Result<Self> {
        let silhouette = match labels.occupied() {
            0 | 1 => None,
            _ => Some(silhouette_score(data, labels, metric)?),
        };
        let (ari, purity) = match data.truth() {
            Some(truth) => (
                Some(adjusted_rand_index(labels, &truth)?),
                Some(purity(labels, &truth)?),
            ),
            None => (None, None),
        };
        let sse = match metric {
            MetricKind::Euclidean => sse(data, labels, centroids)?,
            MetricKind::Cosine => {
                let k = centroids.k().max(labels.k());
                let means = crate::kmeans::update_centroids_with(data, labels, k, MetricKind::Euclidean, false)?;
                sse(data, labels, &means)?
            }
        };
        Ok(EvaluationReport {
            k: labels.k(),
            silhouette,
            sse,
            ari,
            purity,
        })
    }

    /// Scores a labeling with no centroids: SSE is measured against the
    /// members' means.
    pub fn evaluate_labels(data: &Dataset, labels: &LabelVector, metric: MetricKind) -> Result<Self> {
        let k = labels.k().max(2);
        let labels = LabelVector::new(labels.as_slice().to_vec(), k)?;
        let centroids = crate::kmeans::update_centroids_with(data, &labels, k, metric, false)?;
        Self::evaluate(data, &labels, &centroids, metric)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lv(v: &[usize]) -> LabelVector {
        LabelVector::from_assignments(v.to_vec())
    }

    #[test]
    fn ari_examples() {
        assert_eq!(adjusted_rand_index(&lv(&[0, 0, 1, 1]), &lv(&[1, 1, 0, 0])).unwrap(), 1.0);
        // index 0, expected 2/3, max 2  ->  (0 - 2/3) / (2 - 2/3) = -0.5
        let v = adjusted_rand_index(&lv(&[0, 1, 0, 1]), &lv(&[0, 0, 1, 1])).unwrap();
        assert!((v + 0.5).abs() < 1e-15, "{v}");
        let truth = lv(&[0, 1, 2, 2, 1, 0, 0]);
        assert_eq!(adjusted_rand_index(&truth, &truth).unwrap(), 1.0);
    }

    #[test]
    fn ari_degenerate_denominators() {
        // both single-cluster
        assert_eq!(adjusted_rand_index(&lv(&[0, 0, 0]), &lv(&[0, 0, 0])).unwrap(), 1.0);
        // both all-singletons
        assert_eq!(adjusted_rand_index(&lv(&[0, 1, 2]), &lv(&[2, 0, 1])).unwrap(), 1.0);
        // one all-singletons, the other single-cluster
        assert_eq!(adjusted_rand_index(&lv(&[0, 1, 2]), &lv(&[0, 0, 0])).unwrap(), 0.0);
        assert!(adjusted_rand_index(&lv(&[0, 1]), &lv(&[0])).is_err());
    }

    #[test]
    fn purity_examples() {
        let truth = lv(&[0, 1, 1, 0, 2]);
        assert_eq!(purity(&truth, &truth).unwrap(), 1.0);
        assert_eq!(purity(&lv(&[0, 0, 1, 1, 1]), &lv(&[0, 0, 1, 1, 0])).unwrap(), 0.8);
        let balanced: Vec<usize> = (0..10).map(|i| i % 2).collect();
        assert_eq!(purity(&lv(&[0; 10]), &lv(&balanced)).unwrap(), 0.5);
        assert!(purity(&lv(&[0, 1]), &lv(&[0])).is_err());
    }

    #[test]
    fn contingency_sums() {
        let t = ContingencyTable::new(&lv(&[0, 0, 1, 2]), &lv(&[1, 0, 1, 1])).unwrap();
        assert_eq!(t.counts(), &[vec![1, 1], vec![0, 1], vec![0, 1]]);
        assert_eq!(t.row_sums(), &[2, 1, 1]);
        assert_eq!(t.col_sums(), &[1, 3]);
        assert_eq!(t.total(), 4);
    }

    #[test]
    fn silhouette_examples() {
        let data = Dataset::from_rows(&[[0.0], [1.0], [10.0], [11.0]], MetricKind::Euclidean).unwrap();
        let s = silhouette_score(&data, &lv(&[0, 0, 1, 1]), MetricKind::Euclidean).unwrap();
        // a = 1 for all; b = 9.5, 10.5, 9.5, 10.5  ->  mean of 8.5/9.5, 9.5/10.5
        let expected = (8.5 / 9.5 + 9.5 / 10.5) / 2.0;
        assert!((s - expected).abs() < 1e-12);
        assert!((s - 0.899749373).abs() < 1e-9);

        let dup = Dataset::from_rows(&[[0.0], [0.0], [5.0], [5.0]], MetricKind::Euclidean).unwrap();
        assert_eq!(silhouette_score(&dup, &lv(&[0, 0, 1, 1]), MetricKind::Euclidean).unwrap(), 1.0);

        let single = Dataset::from_rows(&[[0.0], [1.0], [2.0]], MetricKind::Euclidean).unwrap();
        let s = silhouette_score(&single, &lv(&[0, 1, 1]), MetricKind::Euclidean).unwrap();
        // point 0 is a singleton; points 1, 2: a = 1, b = 1 and 2
        let expected = (0.0 + 0.0 + 0.5) / 3.0;
        assert!((s - expected).abs() < 1e-12);

        assert!(silhouette_score(&single, &lv(&[0, 0, 0]), MetricKind::Euclidean).is_err());
    }

    #[test]
    fn sse_examples() {
        let data = Dataset::from_rows(&[[0.0, 0.0], [2.0, 0.0]], MetricKind::Euclidean).unwrap();
        let z = CentroidSet::from_rows(&[[1.0, 0.0], [9.0, 9.0]]).unwrap();
        let labels = LabelVector::new(vec![0, 0], 2).unwrap();
        assert_eq!(sse(&data, &labels, &z).unwrap(), 2.0);
        assert_eq!(sse_with(&data, &labels, &z, SseKind::Squared).unwrap(), 2.0);
        let z = CentroidSet::from_rows(&[[0.0, 0.0], [2.0, 0.0]]).unwrap();
        let labels = LabelVector::new(vec![0, 1], 2).unwrap();
        assert_eq!(sse(&data, &labels, &z).unwrap(), 0.0);
        let wrong = CentroidSet::from_rows(&[[0.0], [1.0]]).unwrap();
        assert!(sse(&data, &labels, &wrong).is_err());
    }

    #[test]
    fn ari_mean_near_zero_for_random_labelings() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mean: f64 = (0..100)
            .map(|_| {
                let a: Vec<usize> = (0..200).map(|_| rng.random_range(0..4)).collect();
                let b: Vec<usize> = (0..200).map(|_| rng.random_range(0..4)).collect();
                adjusted_rand_index(&lv(&a), &lv(&b)).unwrap()
            })
            .sum::<f64>()
            / 100.0;
        assert!(mean.abs() <= 0.05, "{mean}");
    }

    #[test]
    fn purity_monotone_under_refinement() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let truth: Vec<usize> = (0..30).map(|_| rng.random_range(0..3)).collect();
            let coarse: Vec<usize> = (0..30).map(|_| rng.random_range(0..3)).collect();
            // split every cluster in two
            let fine: Vec<usize> = coarse.iter().map(|&c| 2 * c + rng.random_range(0..2)).collect();
            let p_coarse = purity(&lv(&coarse), &lv(&truth)).unwrap();
            let p_fine = purity(&lv(&fine), &lv(&truth)).unwrap();
            assert!(p_fine >= p_coarse);
        }
    }

    #[test]
    fn report_without_truth_has_no_external_scores() {
        let data = Dataset::from_rows(&[[0.0], [1.0], [10.0], [11.0]], MetricKind::Euclidean).unwrap();
        let r = EvaluationReport::evaluate_labels(&data, &lv(&[0, 0, 1, 1]), MetricKind::Euclidean).unwrap();
        assert_eq!(r.sse, 2.0);
        assert!(r.ari.is_none() && r.purity.is_none());
        let labeled = data.with_labels(vec![0, 0, 1, 1]).unwrap();
        let r = EvaluationReport::evaluate_labels(&labeled, &lv(&[0, 0, 1, 1]), MetricKind::Euclidean).unwrap();
        assert_eq!(r.ari, Some(1.0));
        assert_eq!(r.purity, Some(1.0));
    }
}
