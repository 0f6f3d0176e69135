//! Diversity-based centroid selection and cluster-count estimation.
//!
//! Selection starts from the least similar pair of points. Every later step
//! scores each unselected point `j` by
//!
//! ```text
//! p[j] = M[j]^2 * m[j] * (M[j] - m[j])
//! ```
//!
//! where `M[j]` and `m[j]` are the largest and smallest similarity between
//! `j` and the points selected so far, and picks the point with the smallest
//! score. The smallest score at each step forms the diversity curve `R`,
//! whose signed curvature has its minimum near the natural number of
//! clusters.
//!
//! Curves are indexed by the number of points already selected: `R[c]` is
//! the score of the point chosen when `c` centroids exist, so `R[0]` and
//! `R[1]` are zero by definition and the curvature minimum `c` is directly
//! the estimated `K`.

use crate::error::{Error, Result};
use crate::similarity::{build_similarity_matrix, min_similarity_pair, SimilarityMatrix};
use crate::types::{CentroidSet, Dataset};

/// Smallest `K` the estimator will return. `K = 2` sits on the artificial
/// `R[0] = R[1] = 0` boundary; use [`DiscernMode::FixedK`] for it.
pub const MIN_ESTIMATED_K: usize = 3;

/// Finite-difference scheme used for `R'` and `R''`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FiniteDifference {
    /// First differences applied twice: central `(f[i+1] - f[i-1]) / 2` in the
    /// interior, one-sided at both ends. `R''` is the gradient of `R'`, so the
    /// interior second derivative spans five points. Defined everywhere.
    #[default]
    RepeatedGradient,
    /// Compact three-point stencil: `R'' = R[i+1] - 2 R[i] + R[i-1]`.
    /// Undefined at both ends.
    ThreePoint,
}

impl FiniteDifference {
    /// Points at each end of the curve whose derivatives use a truncated
    /// stencil; K is never estimated there.
    fn boundary(self) -> usize {
        match self {
            FiniteDifference::RepeatedGradient => 2,
            FiniteDifference::ThreePoint => 1,
        }
    }
}

/// Running column statistics of the selected rows of `S`.
#[derive(Debug, Clone)]
pub struct DiversityState {
    selected: Vec<usize>,
    is_selected: Vec<bool>,
    col_max: Vec<f64>,
    col_min: Vec<f64>,
    p: Vec<f64>,
}

impl DiversityState {
    /// Seeds the state with the least similar pair in `s`.
    pub fn new(s: &SimilarityMatrix) -> Self {
        let (a, b) = min_similarity_pair(s);
        Self::from_pair(s, a, b)
    }

    pub fn from_pair(s: &SimilarityMatrix, a: usize, b: usize) -> Self {
        let n = s.n();
        let mut state = DiversityState {
            selected: vec![a],
            is_selected: vec![false; n],
            col_max: s.row(a).to_vec(),
            col_min: s.row(a).to_vec(),
            p: vec![0.0; n],
        };
        state.is_selected[a] = true;
        state.select(s, b);
        state
    }

    /// Adds row `idx` to the selection and refreshes `M`, `m` and `p`.
    pub fn select(&mut self, s: &SimilarityMatrix, idx: usize) {
        debug_assert!(!self.is_selected[idx], "row {idx} selected twice");
        self.selected.push(idx);
        self.is_selected[idx] = true;
        let row = s.row(idx);
        for j in 0..row.len() {
            let v = row[j];
            if v > self.col_max[j] {
                self.col_max[j] = v;
            }
            if v < self.col_min[j] {
                self.col_min[j] = v;
            }
            let (hi, lo) = (self.col_max[j], self.col_min[j]);
            self.p[j] = hi * hi * lo * (hi - lo);
        }
    }

    /// Unselected point with the smallest score, ties to the smallest index.
    pub fn next_candidate(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (j, &pj) in self.p.iter().enumerate() {
            if self.is_selected[j] {
                continue;
            }
            match best {
                Some((_, b)) if pj >= b => {}
                _ => best = Some((j, pj)),
            }
        }
        best
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn is_selected(&self, j: usize) -> bool {
        self.is_selected[j]
    }

    pub fn col_max(&self) -> &[f64] {
        &self.col_max
    }

    pub fn col_min(&self) -> &[f64] {
        &self.col_min
    }

    /// Diversity scores. Entries of selected columns are stale and ignored.
    pub fn p(&self) -> &[f64] {
        &self.p
    }
}

/// Selection order and diversity curve from [`diversity_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityScan {
    pub order: Vec<usize>,
    /// `r_values[c]` is the score at which `order[c]` was picked; zero for
    /// the initial pair.
    pub r_values: Vec<f64>,
}

/// Selects `l_max` points greedily by diversity.
pub fn diversity_scan(s: &SimilarityMatrix, l_max: usize) -> Result<DiversityScan> {
    let n = s.n();
    if l_max < 2 || l_max > n {
        return Err(Error::domain(
            "diversity_scan",
            format!("l_max must lie in [2, {n}], got {l_max}"),
        ));
    }
    let mut state = DiversityState::new(s);
    let mut r_values = vec![0.0, 0.0];
    while state.selected().len() < l_max {
        let (next, score) = state.next_candidate().expect("unselected rows remain");
        r_values.push(score);
        state.select(s, next);
    }
    Ok(DiversityScan {
        order: state.selected,
        r_values,
    })
}

fn gradient(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut g = vec![0.0; n];
    g[0] = f[1] - f[0];
    g[n - 1] = f[n - 1] - f[n - 2];
    for i in 1..n - 1 {
        g[i] = (f[i + 1] - f[i - 1]) / 2.0;
    }
    g
}

/// Signed curvature `R'' / (1 + R'^2)^(3/2)` of a sampled curve on a unit grid.
///
/// Entries are `None` where the chosen scheme has no stencil.
pub fn signed_curvature(r_values: &[f64], scheme: FiniteDifference) -> Result<Vec<Option<f64>>> {
    if r_values.len() < 4 {
        return Err(Error::domain(
            "signed_curvature",
            format!("need at least 4 samples, got {}", r_values.len()),
        ));
    }
    let kappa = |d1: f64, d2: f64| d2 / (1.0 + d1 * d1).powf(1.5);
    Ok(match scheme {
        FiniteDifference::RepeatedGradient => {
            let d1 = gradient(r_values);
            let d2 = gradient(&d1);
            d1.iter().zip(&d2).map(|(&a, &b)| Some(kappa(a, b))).collect()
        }
        FiniteDifference::ThreePoint => {
            let n = r_values.len();
            (0..n)
                .map(|i| {
                    (i > 0 && i + 1 < n).then(|| {
                        let (prev, cur, next) = (r_values[i - 1], r_values[i], r_values[i + 1]);
                        kappa((next - prev) / 2.0, next - 2.0 * cur + prev)
                    })
                })
                .collect()
        }
    })
}

/// Index of the smallest defined curvature within `[k_min, k_max]`, ties to
/// the smallest index.
pub fn estimate_k(kappa: &[Option<f64>], k_min: usize, k_max: usize) -> Result<usize> {
    let hi = k_max.min(kappa.len().saturating_sub(1));
    let mut best: Option<(usize, f64)> = None;
    for (k, value) in kappa.iter().enumerate().take(hi + 1).skip(k_min) {
        if let Some(v) = *value {
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((k, v));
            }
        }
    }
    best.map(|(k, _)| k).ok_or_else(|| {
        Error::domain(
            "estimate_k",
            format!("no curvature values in [{k_min}, {k_max}]"),
        )
    })
}

/// Diversity curve, its curvature and the K picked from it.
#[derive(Debug, Clone, PartialEq)]
pub struct KEstimationCurve {
    pub r_values: Vec<f64>,
    pub kappa: Vec<Option<f64>>,
    pub estimated_k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscernMode {
    /// Estimate K from the curvature minimum. `k_max` caps the scan; `None`
    /// scans every point.
    EstimateK { k_max: Option<usize> },
    /// Select exactly this many centroids; no curvature is computed.
    FixedK(usize),
}

impl Default for DiscernMode {
    fn default() -> Self {
        DiscernMode::EstimateK { k_max: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscernResult {
    pub centroid_indices: Vec<usize>,
    pub centroids: CentroidSet,
    /// Present when K was estimated.
    pub curve: Option<KEstimationCurve>,
}

impl DiscernResult {
    pub fn k(&self) -> usize {
        self.centroid_indices.len()
    }
}

/// Picks initial centroids (and optionally K) for `data`.
pub fn discern_init(data: &Dataset, mode: DiscernMode) -> Result<DiscernResult> {
    discern_init_with(data, mode, FiniteDifference::default())
}

pub fn discern_init_with(
    data: &Dataset,
    mode: DiscernMode,
    scheme: FiniteDifference,
) -> Result<DiscernResult> {
    let s = build_similarity_matrix(data)?;
    discern_from_similarity(data, &s, mode, scheme)
}

/// Same as [`discern_init_with`] but reuses a precomputed similarity matrix.
pub fn discern_from_similarity(
    data: &Dataset,
    s: &SimilarityMatrix,
    mode: DiscernMode,
    scheme: FiniteDifference,
) -> Result<DiscernResult> {
    let n = data.n();
    if s.n() != n {
        return Err(Error::DimensionMismatch {
            what: "similarity matrix size",
            expected: n,
            actual: s.n(),
        });
    }
    match mode {
        DiscernMode::FixedK(k) => {
            if k < 2 || k > n {
                return Err(Error::domain(
                    "discern",
                    format!("k must lie in [2, {n}], got {k}"),
                ));
            }
            let scan = diversity_scan(s, k)?;
            let centroids = CentroidSet::from_data_rows(data, &scan.order)?;
            Ok(DiscernResult {
                centroid_indices: scan.order,
                centroids,
                curve: None,
            })
        }
        DiscernMode::EstimateK { k_max } => {
            let margin = scheme.boundary();
            let l_max = match k_max {
                Some(k) if k < MIN_ESTIMATED_K => {
                    return Err(Error::domain(
                        "discern",
                        format!("k_max must be at least {MIN_ESTIMATED_K}, got {k}"),
                    ))
                }
                Some(k) => (k + margin + 1).min(n),
                None => n,
            };
            let upper = l_max
                .checked_sub(margin + 1)
                .map(|u| k_max.map_or(u, |k| k.min(u)))
                .filter(|&u| u >= MIN_ESTIMATED_K)
                .ok_or_else(|| {
                    Error::domain(
                        "discern",
                        format!(
                            "{n} points are too few to estimate K (need at least {})",
                            MIN_ESTIMATED_K + margin + 1
                        ),
                    )
                })?;
            let scan = diversity_scan(s, l_max)?;
            let kappa = signed_curvature(&scan.r_values, scheme)?;
            let k = estimate_k(&kappa, MIN_ESTIMATED_K, upper)?;
            let indices = scan.order[..k].to_vec();
            let centroids = CentroidSet::from_data_rows(data, &indices)?;
            Ok(DiscernResult {
                centroid_indices: indices,
                centroids,
                curve: Some(KEstimationCurve {
                    r_values: scan.r_values,
                    kappa,
                    estimated_k: k,
                }),
            })
        }
    }
}
