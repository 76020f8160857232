//! Linear and quadratic discriminant analysis with ridge-regularized
//! covariance estimates.

use serde::{Deserialize, Serialize};

use super::linalg::Cholesky;
use crate::audio::ClassLabel;
use crate::error::Result;

/// LDA reduces to one linear score per class:
/// `score_c(x) = w_c . x - 0.5 mu_c . w_c + ln pi_c` with `w_c = Sigma^-1 mu_c`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LdaModel {
    pub classes: Vec<ClassLabel>,
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QdaClass {
    pub label: ClassLabel,
    pub mean: Vec<f64>,
    pub chol: Cholesky,
    pub log_det: f64,
    pub log_prior: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QdaModel {
    pub classes: Vec<QdaClass>,
}

/// Per-class means, in class-code order, over the classes present.
fn class_partition(
    rows: &[Vec<f64>],
    labels: &[ClassLabel],
) -> Vec<(ClassLabel, Vec<usize>, Vec<f64>)> {
    let dim = rows[0].len();
    let mut out = Vec::new();
    for label in ClassLabel::ALL {
        let members: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == label)
            .map(|(i, _)| i)
            .collect();
        if members.is_empty() {
            continue;
        }
        let mut mean = vec![0.0; dim];
        for &i in &members {
            for (m, &v) in mean.iter_mut().zip(&rows[i]) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= members.len() as f64);
        out.push((label, members, mean));
    }
    out
}

fn scatter_into(cov: &mut [f64], dim: usize, row: &[f64], mean: &[f64], scratch: &mut Vec<f64>) {
    scratch.clear();
    scratch.extend(row.iter().zip(mean).map(|(&v, &m)| v - m));
    for i in 0..dim {
        let zi = scratch[i];
        if zi == 0.0 {
            continue;
        }
        let base = i * dim;
        for j in 0..=i {
            cov[base + j] += zi * scratch[j];
        }
    }
}

fn mirror_upper(cov: &mut [f64], dim: usize) {
    for i in 0..dim {
        for j in (i + 1)..dim {
            cov[i * dim + j] = cov[j * dim + i];
        }
    }
}

pub fn fit_lda(rows: &[Vec<f64>], labels: &[ClassLabel], ridge: f64) -> Result<LdaModel> {
    let dim = rows[0].len();
    let n = rows.len() as f64;
    let parts = class_partition(rows, labels);

    // Pooled within-class covariance (population normalization).
    let mut cov = vec![0.0; dim * dim];
    let mut scratch = Vec::with_capacity(dim);
    for (_, members, mean) in &parts {
        for &i in members {
            scatter_into(&mut cov, dim, &rows[i], mean, &mut scratch);
        }
    }
    for v in cov.iter_mut() {
        *v /= n;
    }
    for i in 0..dim {
        cov[i * dim + i] += ridge;
    }
    mirror_upper(&mut cov, dim);

    let chol = Cholesky::decompose(&cov, dim)?;
    let mut classes = Vec::new();
    let mut weights = Vec::new();
    let mut bias = Vec::new();
    for (label, members, mean) in &parts {
        let w = chol.solve(mean);
        let b = -0.5 * mean.iter().zip(&w).map(|(&m, &wi)| m * wi).sum::<f64>()
            + (members.len() as f64 / n).ln();
        classes.push(*label);
        weights.push(w);
        bias.push(b);
    }
    Ok(LdaModel {
        classes,
        weights,
        bias,
    })
}

impl LdaModel {
    pub fn scores(&self, x: &[f64]) -> Vec<(ClassLabel, f64)> {
        self.classes
            .iter()
            .zip(self.weights.iter().zip(&self.bias))
            .map(|(&label, (w, &b))| {
                let s: f64 = w.iter().zip(x).map(|(&wi, &xi)| wi * xi).sum::<f64>() + b;
                (label, s)
            })
            .collect()
    }
}

pub fn fit_qda(rows: &[Vec<f64>], labels: &[ClassLabel], ridge: f64) -> Result<QdaModel> {
    let dim = rows[0].len();
    let n = rows.len() as f64;
    let parts = class_partition(rows, labels);
    let mut classes = Vec::new();
    let mut scratch = Vec::with_capacity(dim);
    for (label, members, mean) in &parts {
        let mut cov = vec![0.0; dim * dim];
        for &i in members {
            scatter_into(&mut cov, dim, &rows[i], mean, &mut scratch);
        }
        for v in cov.iter_mut() {
            *v /= members.len() as f64;
        }
        for i in 0..dim {
            cov[i * dim + i] += ridge;
        }
        mirror_upper(&mut cov, dim);
        let chol = Cholesky::decompose(&cov, dim)?;
        let log_det = chol.log_det();
        classes.push(QdaClass {
            label: *label,
            mean: mean.clone(),
            chol,
            log_det,
            log_prior: (members.len() as f64 / n).ln(),
        });
    }
    Ok(QdaModel { classes })
}

impl QdaModel {
    pub fn scores(&self, x: &[f64]) -> Vec<(ClassLabel, f64)> {
        self.classes
            .iter()
            .map(|c| {
                let z: Vec<f64> = x.iter().zip(&c.mean).map(|(&v, &m)| v - m).collect();
                // z^T Sigma^-1 z = ||L^-1 z||^2
                let y = c.chol.forward(&z);
                let maha: f64 = y.iter().map(|&v| v * v).sum();
                (c.label, -0.5 * c.log_det - 0.5 * maha + c.log_prior)
            })
            .collect()
    }
}
