//! Dense vectors and the row-major linear operator `A`.

use crate::error::{check_len, Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm2(a: &[f64]) -> f64 {
    norm2_sq(a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn norm1(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).sum()
}

/// `‖a − b‖∞`.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// `out = (1 − w)·out + w·v`.
pub fn blend_into(out: &mut [f64], v: &[f64], w: f64) {
    for (o, x) in out.iter_mut().zip(v) {
        *o = (1.0 - w) * *o + w * x;
    }
}

/// Dense `n × p` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    row_norms: Vec<f64>,
}

impl LinearOperator {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Validation {
                field: "operator",
                reason: format!("empty shape {rows}x{cols}"),
            });
        }
        check_len("operator data", rows * cols, data.len())?;
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation {
                field: "operator",
                reason: format!("non-finite entry at flat index {bad}"),
            });
        }
        let row_norms = data.chunks_exact(cols).map(norm2).collect();
        Ok(Self {
            rows,
            cols,
            data,
            row_norms,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * p);
        for r in rows {
            check_len("operator row", p, r.len())?;
            data.extend_from_slice(r);
        }
        Self::new(n, p, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self::new(n, n, data).expect("identity is well formed")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![0.0; rows * cols]).expect("zero operator is well formed")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Euclidean norms of the rows of `A`, i.e. of the columns of `Aᵀ`.
    pub fn row_norms(&self) -> &[f64] {
        &self.row_norms
    }

    /// `Ax`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("apply", self.cols, x.len())?;
        Ok(self.data.chunks_exact(self.cols).map(|r| dot(r, x)).collect())
    }

    /// `Aᵀy`.
    pub fn adjoint_apply(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len("adjoint_apply", self.rows, y.len())?;
        let mut out = vec![0.0; self.cols];
        for (r, &yi) in self.data.chunks_exact(self.cols).zip(y) {
            if yi != 0.0 {
                for (o, a) in out.iter_mut().zip(r) {
                    *o += a * yi;
                }
            }
        }
        Ok(out)
    }
}
