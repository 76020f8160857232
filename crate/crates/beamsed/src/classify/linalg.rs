//! Dense symmetric positive-definite solves via Cholesky.

use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix,
/// stored row-major.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Cholesky {
    l: Vec<f64>,
    dim: usize,
}

impl Cholesky {
    /// Factor a row-major symmetric matrix. Fails with `SingularCovariance`
    /// when the matrix is not (numerically) positive definite.
    pub fn decompose(a: &[f64], dim: usize) -> Result<Cholesky> {
        assert_eq!(a.len(), dim * dim);
        let mut l = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                let mut sum = a[i * dim + j];
                for k in 0..j {
                    sum -= l[i * dim + k] * l[j * dim + k];
                }
                if i == j {
                    if sum <= 0.0 || !sum.is_finite() {
                        return Err(Error::SingularCovariance);
                    }
                    l[i * dim + j] = sum.sqrt();
                } else {
                    l[i * dim + j] = sum / l[j * dim + j];
                }
            }
        }
        Ok(Cholesky { l, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Solve `L y = b`.
    pub fn forward(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut sum = b[i];
            for k in 0..i {
                sum -= self.l[i * n + k] * y[k];
            }
            y[i] = sum / self.l[i * n + i];
        }
        y
    }

    /// Solve `A x = b` with `A = L L^T`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut x = self.forward(b);
        for i in (0..n).rev() {
            let mut sum = x[i];
            for k in (i + 1)..n {
                sum -= self.l[k * n + i] * x[k];
            }
            x[i] = sum / self.l[i * n + i];
        }
        x
    }

    /// `ln det A = 2 sum ln L_ii`.
    pub fn log_det(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.l[i * self.dim + i].ln())
            .sum::<f64>()
            * 2.0
    }
}
