//! Dense pairwise cosine-similarity matrix.

use ndarray::{Array2, ArrayView2};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::types::{dot, norm, Dataset};

/// Symmetric `n × n` matrix of pairwise cosine similarities.
///
/// The diagonal is exactly 1, every entry lies in `[-1, 1]` and
/// `values[i][j] == values[j][i]` bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    values: Array2<f64>,
}

impl SimilarityMatrix {
    /// Wraps precomputed values after checking the matrix invariants.
    pub fn from_values(values: Array2<f64>) -> Result<Self> {
        let (rows, cols) = values.dim();
        if rows != cols {
            return Err(Error::DimensionMismatch {
                what: "similarity matrix columns",
                expected: rows,
                actual: cols,
            });
        }
        if rows < 2 {
            return Err(Error::Invalid("similarity matrix needs n >= 2".into()));
        }
        for i in 0..rows {
            if values[[i, i]] != 1.0 {
                return Err(Error::Invalid(format!("diagonal entry {i} is not 1")));
            }
            for j in 0..i {
                let v = values[[i, j]];
                if !(-1.0..=1.0).contains(&v) {
                    return Err(Error::Invalid(format!("entry ({i}, {j}) = {v} outside [-1, 1]")));
                }
                if v != values[[j, i]] {
                    return Err(Error::Invalid(format!("entry ({i}, {j}) is not symmetric")));
                }
            }
        }
        Ok(SimilarityMatrix {
            values: values.as_standard_layout().into_owned(),
        })
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[[i, j]]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.values.as_slice().expect("standard layout")[i * n..(i + 1) * n]
    }

    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }
}

/// Computes `S[i][j] = cos(x_i, x_j)` for every pair of rows.
///
/// Rows are normalized once; each upper-triangle entry is a single dot
/// product accumulated in index order and then mirrored, so the result does
/// not depend on how rayon schedules the row blocks.
pub fn build_similarity_matrix(data: &Dataset) -> Result<SimilarityMatrix> {
    let n = data.n();
    let d = data.dim();
    let mut unit = Vec::with_capacity(n * d);
    for (i, row) in data.rows().enumerate() {
        let len = norm(row);
        if len == 0.0 {
            return Err(Error::ZeroNorm { row: i });
        }
        unit.extend(row.iter().map(|v| v / len));
    }

    // blocks of rows, each swept against column tiles, keep the rows being
    // compared resident in cache
    const ROW_BLOCK: usize = 16;
    const COL_TILE: usize = 128;
    let mut values = vec![0.0; n * n];
    values
        .par_chunks_mut(ROW_BLOCK * n)
        .enumerate()
        .for_each(|(block, out)| {
            let first = block * ROW_BLOCK;
            let rows = out.len() / n;
            for r in 0..rows {
                out[r * n + first + r] = 1.0;
            }
            for j0 in (first..n).step_by(COL_TILE) {
                let j1 = (j0 + COL_TILE).min(n);
                for r in 0..rows {
                    let i = first + r;
                    let xi = &unit[i * d..(i + 1) * d];
                    for j in (i + 1).max(j0)..j1 {
                        let xj = &unit[j * d..(j + 1) * d];
                        out[r * n + j] = dot(xi, xj).clamp(-1.0, 1.0);
                    }
                }
            }
        });
    // mirror in square tiles so both the reads and the writes stay in cache
    const TILE: usize = 64;
    for bi in (0..n).step_by(TILE) {
        for bj in (bi..n).step_by(TILE) {
            for i in bi..(bi + TILE).min(n) {
                for j in bj.max(i + 1)..(bj + TILE).min(n) {
                    values[j * n + i] = values[i * n + j];
                }
            }
        }
    }

    let values = Array2::from_shape_vec((n, n), values).expect("n*n buffer");
    Ok(SimilarityMatrix { values })
}

/// Off-diagonal pair `(i, j)`, `i < j`, with the smallest similarity.
/// Ties go to the lexicographically smallest pair.
pub fn min_similarity_pair(s: &SimilarityMatrix) -> (usize, usize) {
    let n = s.n();
    let mut best = (0, 1);
    let mut best_value = s.get(0, 1);
    for i in 0..n {
        let row = s.row(i);
        for (j, &v) in row.iter().enumerate().skip(i + 1) {
            if v < best_value {
                best_value = v;
                best = (i, j);
            }
        }
    }
    best
}
