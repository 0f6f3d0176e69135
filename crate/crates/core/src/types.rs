//! Shared domain types and the two metrics used throughout the crate.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use ndarray::{Array2, ArrayView2, Axis};

use crate::error::{Error, Result};

/// Assignment rule used when clustering: nearest centroid by Euclidean
/// distance, or most similar centroid by cosine similarity (spherical).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MetricKind {
    #[default]
    Euclidean,
    Cosine,
}

impl MetricKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Euclidean => "euclidean",
            MetricKind::Cosine => "cosine",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(MetricKind::Euclidean),
            "cosine" => Ok(MetricKind::Cosine),
            other => Err(Error::Invalid(format!("unknown metric '{other}'"))),
        }
    }
}

/// A validated `n × d` feature matrix with optional ground-truth labels.
///
/// Invariants checked on construction:
/// - `n ≥ 2`, `d ≥ 1`;
/// - every value is finite;
/// - under [`MetricKind::Cosine`] no row has zero norm;
/// - labels, when present, have length `n` and use contiguous ids `0..t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Array2<f64>,
    labels: Option<Vec<usize>>,
    metric: MetricKind,
}

impl Dataset {
    pub fn new(features: Array2<f64>, metric: MetricKind) -> Result<Self> {
        let features = features.as_standard_layout().into_owned();
        let (n, d) = features.dim();
        if n < 2 {
            return Err(Error::Invalid(format!("dataset needs at least 2 rows, got {n}")));
        }
        if d < 1 {
            return Err(Error::Invalid("dataset needs at least 1 column".into()));
        }
        for (row, values) in features.axis_iter(Axis(0)).enumerate() {
            if let Some(column) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row, column });
            }
        }
        let dataset = Dataset {
            features,
            labels: None,
            metric,
        };
        dataset.check_metric()?;
        Ok(dataset)
    }

    /// Builds a dataset from row vectors, which must all have the same length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], metric: MetricKind) -> Result<Self> {
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let mut flat = Vec::with_capacity(rows.len() * d);
        for row in rows {
            let row = row.as_ref();
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    what: "dataset row",
                    expected: d,
                    actual: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        let features = Array2::from_shape_vec((rows.len(), d), flat)
            .map_err(|e| Error::Invalid(e.to_string()))?;
        Dataset::new(features, metric)
    }

    /// Attaches ground-truth labels. Ids must already be contiguous from 0;
    /// use [`normalize_labels`] for arbitrary class names.
    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::LengthMismatch {
                features: self.n(),
                labels: labels.len(),
            });
        }
        let classes = labels.iter().max().map_or(0, |&m| m + 1);
        let mut seen = vec![false; classes];
        for &l in &labels {
            seen[l] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::Invalid(format!(
                "class ids must be contiguous from 0; id {missing} is unused"
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Returns the same data under a different metric, re-checking the
    /// cosine zero-row rule.
    pub fn with_metric(mut self, metric: MetricKind) -> Result<Self> {
        self.metric = metric;
        self.check_metric()?;
        Ok(self)
    }

    fn check_metric(&self) -> Result<()> {
        if self.metric == MetricKind::Cosine {
            for row in 0..self.n() {
                if self.row(row).iter().all(|&v| v == 0.0) {
                    return Err(Error::ZeroNorm { row });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.features.nrows()
    }

    pub fn dim(&self) -> usize {
        self.features.ncols()
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn features(&self) -> ArrayView2<'_, f64> {
        self.features.view()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.features.as_slice().expect("standard layout")[i * d..(i + 1) * d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.features
            .as_slice()
            .expect("standard layout")
            .chunks_exact(self.dim())
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Ground truth as a [`LabelVector`], when labels are attached.
    pub fn truth(&self) -> Option<LabelVector> {
        let labels = self.labels.as_ref()?;
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        Some(LabelVector {
            assignments: labels.clone(),
            k,
        })
    }

    /// Number of ground-truth classes, when labels are attached.
    pub fn class_count(&self) -> Option<usize> {
        self.labels
            .as_ref()
            .map(|l| l.iter().max().map_or(0, |&m| m + 1))
    }

    /// Reorders rows (and labels) so that new row `i` is old row `order[i]`.
    pub fn select_rows(&self, order: &[usize]) -> Result<Self> {
        let n = self.n();
        if let Some(&bad) = order.iter().find(|&&i| i >= n) {
            return Err(Error::Invalid(format!("row index {bad} out of range for {n} rows")));
        }
        let features = self.features.select(Axis(0), order);
        let out = Dataset::new(features, self.metric)?;
        match &self.labels {
            Some(labels) => {
                let picked: Vec<usize> = order.iter().map(|&i| labels[i]).collect();
                // a subset may drop classes; fall back to renumbering then
                let fallback = normalize_labels(&picked);
                out.clone()
                    .with_labels(picked)
                    .or_else(|_| out.with_labels(fallback))
            }
            None => Ok(out),
        }
    }

    /// Rows scaled to unit L2 norm. Zero rows are left as zeros.
    pub fn unit_rows(&self) -> Array2<f64> {
        let mut out = self.features.clone();
        for mut row in out.axis_iter_mut(Axis(0)) {
            let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.mapv_inplace(|v| v / norm);
            }
        }
        out
    }
}

/// Maps arbitrary class values onto contiguous ids in first-appearance order.
pub fn normalize_labels<T: Eq + Hash + Clone>(raw: &[T]) -> Vec<usize> {
    let mut ids: HashMap<T, usize> = HashMap::new();
    raw.iter()
        .map(|v| {
            let next = ids.len();
            *ids.entry(v.clone()).or_insert(next)
        })
        .collect()
}

/// Cluster assignment for each of `n` points, every entry in `[0, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelVector {
    assignments: Vec<usize>,
    k: usize,
}

impl LabelVector {
    pub fn new(assignments: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&bad) = assignments.iter().find(|&&l| l >= k) {
            return Err(Error::Invalid(format!("label {bad} out of range for k = {k}")));
        }
        Ok(LabelVector { assignments, k })
    }

    /// Infers `k` as one past the largest label.
    pub fn from_assignments(assignments: Vec<usize>) -> Self {
        let k = assignments.iter().max().map_or(0, |&m| m + 1);
        LabelVector { assignments, k }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.assignments
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.assignments
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.assignments {
            sizes[l] += 1;
        }
        sizes
    }

    /// Number of clusters with at least one member.
    pub fn occupied(&self) -> usize {
        self.cluster_sizes().iter().filter(|&&s| s > 0).count()
    }
}

/// `K × d` centroid matrix, optionally remembering which data rows the
/// centroids were taken from.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidSet {
    centers: Array2<f64>,
    source_indices: Option<Vec<usize>>,
}

impl CentroidSet {
    pub fn new(centers: Array2<f64>) -> Result<Self> {
        let centers = centers.as_standard_layout().into_owned();
        if centers.nrows() < 2 {
            return Err(Error::domain(
                "centroid set",
                format!("K must be at least 2, got {}", centers.nrows()),
            ));
        }
        if centers.ncols() < 1 {
            return Err(Error::Invalid("centroids need at least 1 column".into()));
        }
        for (row, values) in centers.axis_iter(Axis(0)).enumerate() {
            if let Some(column) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row, column });
            }
        }
        Ok(CentroidSet {
            centers,
            source_indices: None,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let mut flat = Vec::with_capacity(rows.len() * d);
        for row in rows {
            let row = row.as_ref();
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    what: "centroid row",
                    expected: d,
                    actual: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        let centers = Array2::from_shape_vec((rows.len(), d), flat)
            .map_err(|e| Error::Invalid(e.to_string()))?;
        CentroidSet::new(centers)
    }

    /// Centroids copied from the given data rows, in the given order.
    pub fn from_data_rows(data: &Dataset, indices: &[usize]) -> Result<Self> {
        let n = data.n();
        let mut seen = vec![false; n];
        for &i in indices {
            if i >= n {
                return Err(Error::Invalid(format!("row index {i} out of range for {n} rows")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Invalid(format!("row index {i} selected twice")));
            }
        }
        let mut set = CentroidSet::new(data.features().select(Axis(0), indices))?;
        set.source_indices = Some(indices.to_vec());
        Ok(set)
    }

    /// Attaches source row indices without re-checking them against a dataset.
    pub fn with_source_indices(mut self, indices: Vec<usize>) -> Result<Self> {
        if indices.len() != self.k() {
            return Err(Error::LengthMismatch {
                features: self.k(),
                labels: indices.len(),
            });
        }
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("source indices must be distinct".into()));
        }
        self.source_indices = Some(indices);
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.centers.nrows()
    }

    pub fn dim(&self) -> usize {
        self.centers.ncols()
    }

    pub fn centers(&self) -> ArrayView2<'_, f64> {
        self.centers.view()
    }

    pub fn center(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.centers.as_slice().expect("standard layout")[i * d..(i + 1) * d]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.centers
            .as_slice()
            .expect("standard layout")
            .chunks_exact(self.dim())
    }

    pub fn source_indices(&self) -> Option<&[usize]> {
        self.source_indices.as_deref()
    }
}

#[inline]
pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[inline]
pub(crate) fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

#[inline]
pub(crate) fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let diff = a - b;
            diff * diff
        })
        .sum()
}

/// Cosine of the angle between `x` and `y`, clamped to `[-1, 1]`.
pub fn cosine_similarity(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "cosine_similarity",
            expected: x.len(),
            actual: y.len(),
        });
    }
    let (nx, ny) = (norm(x), norm(y));
    if nx == 0.0 {
        return Err(Error::domain("cosine_similarity", "vector x has zero norm"));
    }
    if ny == 0.0 {
        return Err(Error::domain("cosine_similarity", "vector y has zero norm"));
    }
    Ok((dot(x, y) / (nx * ny)).clamp(-1.0, 1.0))
}

pub fn euclidean_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "euclidean_distance",
            expected: x.len(),
            actual: y.len(),
        });
    }
    Ok(squared_distance(x, y).sqrt())
}
