use serde::{Deserialize, Serialize};

use super::point::{dot, Point};
use crate::error::{ensure_dims, Error, Result};

/// A bounded linear operator ℝᵐ → ℝᵏ stored as a dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct DenseOperator {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseOperator {
    /// Builds an operator from its rows. All rows must share one nonzero length.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidProblem(
                "an operator needs at least one row and one column".into(),
            ));
        }
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            ensure_dims("operator row length", row.len(), n_cols)?;
            entries.extend(row);
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::NumericOverflow {
                context: "operator entries",
            });
        }
        Ok(DenseOperator {
            rows: n_rows,
            cols: n_cols,
            entries,
        })
    }

    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        ensure_dims("operator entry count", entries.len(), rows * cols)?;
        let rows_vec = entries.chunks(cols.max(1)).map(<[f64]>::to_vec).collect();
        Self::from_rows(rows_vec)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut entries = vec![0.0; n * n];
        for (i, d) in diag.iter().enumerate() {
            entries[i * n + i] = *d;
        }
        DenseOperator {
            rows: n,
            cols: n,
            entries,
        }
    }

    /// The 1×1 operator `x ↦ value·x`.
    pub fn scalar(value: f64) -> Self {
        Self::diagonal(&[value])
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseOperator {
            rows,
            cols,
            entries: vec![0.0; rows * cols],
        }
    }

    pub fn domain_dim(&self) -> usize {
        self.cols
    }

    pub fn codomain_dim(&self) -> usize {
        self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0.0)
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        ensure_dims("operator apply", x.dim(), self.cols)?;
        let out = (0..self.rows)
            .map(|r| dot(self.row(r), x.coords()))
            .collect();
        Point::from_vec_unchecked(out).finite("operator apply")
    }

    /// Applies the adjoint without materializing the transpose.
    pub fn apply_adjoint(&self, v: &Point) -> Result<Point> {
        ensure_dims("adjoint apply", v.dim(), self.rows)?;
        let mut out = vec![0.0; self.cols];
        for (r, &vr) in v.coords().iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(r)) {
                *o += a * vr;
            }
        }
        Point::from_vec_unchecked(out).finite("adjoint apply")
    }

    /// The transpose, which is the Hilbert-space adjoint for the Euclidean inner product.
    pub fn adjoint(&self) -> DenseOperator {
        let mut entries = vec![0.0; self.entries.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                entries[c * self.rows + r] = self.get(r, c);
            }
        }
        DenseOperator {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Dense product `self · other`.
    pub fn compose(&self, other: &DenseOperator) -> Result<DenseOperator> {
        ensure_dims("operator composition", self.cols, other.rows)?;
        let mut entries = vec![0.0; self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                for c in 0..other.cols {
                    entries[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        Ok(DenseOperator {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }
}

impl TryFrom<Vec<Vec<f64>>> for DenseOperator {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        DenseOperator::from_rows(rows)
    }
}

impl From<DenseOperator> for Vec<Vec<f64>> {
    fn from(op: DenseOperator) -> Self {
        op.to_rows()
    }
}

pub fn apply(op: &DenseOperator, x: &Point) -> Result<Point> {
    op.apply(x)
}

pub fn adjoint(op: &DenseOperator) -> DenseOperator {
    op.adjoint()
}
