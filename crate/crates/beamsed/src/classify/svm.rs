//! Soft-margin SVM trained by sequential minimal optimization on the dual,
//! with maximal-violating-pair working-set selection.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::audio::ClassLabel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    Linear,
    Rbf { gamma: f64 },
}

impl Kernel {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            Kernel::Linear => a.iter().zip(b).map(|(&x, &y)| x * y).sum(),
            Kernel::Rbf { gamma } => {
                let d2: f64 = a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum();
                (-gamma * d2).exp()
            }
        }
    }
}

/// One binary machine: decision `f(x) = sum_i coeff_i K(sv_i, x) + bias`,
/// where `coeff_i = alpha_i * y_i` over the support vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BinarySvm {
    pub support_vectors: Vec<Vec<f64>>,
    pub coeffs: Vec<f64>,
    pub bias: f64,
    pub kernel: Kernel,
}

impl BinarySvm {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.coeffs)
            .map(|(sv, &c)| c * self.kernel.eval(sv, x))
            .sum::<f64>()
            + self.bias
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SvmOvr {
    pub classes: Vec<ClassLabel>,
    pub machines: Vec<BinarySvm>,
}

impl SvmOvr {
    pub fn scores(&self, x: &[f64]) -> Vec<(ClassLabel, f64)> {
        self.classes
            .iter()
            .zip(&self.machines)
            .map(|(&label, m)| (label, m.decision(x)))
            .collect()
    }
}

pub const KKT_TOLERANCE: f64 = 1e-3;

/// LRU-ish cache of kernel rows. SMO revisits a small active set, so even a
/// modest cap removes most of the O(n d) row recomputations.
struct RowCache {
    rows: HashMap<usize, Vec<f64>>,
    order: std::collections::VecDeque<usize>,
    cap: usize,
}

impl RowCache {
    fn new(n: usize, dim: usize) -> RowCache {
        // Budget ~64 MB of f64 rows.
        let max_rows = (64usize << 20) / (8 * n.max(1));
        let cap = max_rows.clamp(16, n.max(16));
        let _ = dim;
        RowCache {
            rows: HashMap::new(),
            order: std::collections::VecDeque::new(),
            cap,
        }
    }

    fn get_or_compute(&mut self, i: usize, compute: impl FnOnce() -> Vec<f64>) -> &Vec<f64> {
        if !self.rows.contains_key(&i) {
            if self.rows.len() >= self.cap {
                if let Some(old) = self.order.pop_front() {
                    self.rows.remove(&old);
                }
            }
            self.rows.insert(i, compute());
            self.order.push_back(i);
        }
        self.rows.get(&i).unwrap()
    }
}

/// Solve the binary soft-margin dual for labels `y` in {-1, +1}.
///
/// Works on the standard form `min 1/2 a^T Q a - e^T a` s.t. `y^T a = 0`,
/// `0 <= a <= C`, stopping when the maximal KKT violation drops below `tol`.
pub fn solve_binary(
    rows: &[Vec<f64>],
    y: &[f64],
    c: f64,
    kernel: Kernel,
    tol: f64,
    max_iter: usize,
) -> Result<BinarySvm> {
    let n = rows.len();
    let mut alpha = vec![0.0f64; n];
    // G_i = (Q a)_i - 1; at a = 0 every entry is -1.
    let mut grad = vec![-1.0f64; n];
    let mut cache = RowCache::new(n, rows[0].len());
    let kernel_row =
        |i: usize| -> Vec<f64> { rows.iter().map(|r| kernel.eval(&rows[i], r)).collect() };

    let mut iterations = 0;
    let (mut m_up, mut m_low);
    loop {
        // Maximal violating pair over v = -y G.
        let mut i_up: Option<usize> = None;
        let mut j_low: Option<usize> = None;
        m_up = f64::NEG_INFINITY;
        m_low = f64::INFINITY;
        for t in 0..n {
            let v = -y[t] * grad[t];
            let in_up = (y[t] > 0.0 && alpha[t] < c) || (y[t] < 0.0 && alpha[t] > 0.0);
            let in_low = (y[t] > 0.0 && alpha[t] > 0.0) || (y[t] < 0.0 && alpha[t] < c);
            if in_up && v > m_up {
                m_up = v;
                i_up = Some(t);
            }
            if in_low && v < m_low {
                m_low = v;
                j_low = Some(t);
            }
        }
        let (i, j) = match (i_up, j_low) {
            (Some(i), Some(j)) => (i, j),
            _ => break, // fully bounded in one direction; optimal
        };
        if m_up - m_low <= tol {
            break;
        }
        if iterations >= max_iter {
            return Err(Error::SmoNonConvergence {
                iterations,
                violation: m_up - m_low,
            });
        }
        iterations += 1;

        let row_i = cache.get_or_compute(i, || kernel_row(i)).clone();
        let k_ii = row_i[i];
        let k_jj = {
            let row_j = cache.get_or_compute(j, || kernel_row(j));
            row_j[j]
        };
        let k_ij = row_i[j];
        let a_q = (k_ii + k_jj - 2.0 * k_ij).max(1e-12);
        let delta_unclipped = (m_up - m_low) / a_q;

        // Feasible step range keeping both alphas in [0, C].
        let (lo_i, hi_i) = if y[i] > 0.0 {
            (-alpha[i], c - alpha[i])
        } else {
            (alpha[i] - c, alpha[i])
        };
        let (lo_j, hi_j) = if y[j] > 0.0 {
            (alpha[j] - c, alpha[j])
        } else {
            (-alpha[j], c - alpha[j])
        };
        let delta = delta_unclipped.clamp(lo_i.max(lo_j), hi_i.min(hi_j));
        if delta == 0.0 {
            return Err(Error::SmoNonConvergence {
                iterations,
                violation: m_up - m_low,
            });
        }
        let d_alpha_i = y[i] * delta;
        let d_alpha_j = -y[j] * delta;
        alpha[i] += d_alpha_i;
        alpha[j] += d_alpha_j;

        let row_j = cache.get_or_compute(j, || kernel_row(j)).clone();
        for t in 0..n {
            grad[t] += y[t] * (y[i] * d_alpha_i * row_i[t] + y[j] * d_alpha_j * row_j[t]);
        }
    }

    // Bias from the free support vectors, else the violation midpoint.
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    for t in 0..n {
        if alpha[t] > 0.0 && alpha[t] < c {
            free_sum += -y[t] * grad[t];
            free_count += 1;
        }
    }
    let bias = if free_count > 0 {
        free_sum / free_count as f64
    } else {
        (m_up + m_low) / 2.0
    };

    let mut support_vectors = Vec::new();
    let mut coeffs = Vec::new();
    for t in 0..n {
        if alpha[t] > 0.0 {
            support_vectors.push(rows[t].clone());
            coeffs.push(alpha[t] * y[t]);
        }
    }
    Ok(BinarySvm {
        support_vectors,
        coeffs,
        bias,
        kernel,
    })
}

/// One-vs-rest training over the classes present in `labels`.
pub fn fit_svm_ovr(
    rows: &[Vec<f64>],
    labels: &[ClassLabel],
    c: f64,
    kernel: Kernel,
    tol: f64,
) -> Result<SvmOvr> {
    let classes: Vec<ClassLabel> = ClassLabel::ALL
        .into_iter()
        .filter(|l| labels.contains(l))
        .collect();
    let max_iter = (rows.len() * 40).max(20_000);
    let mut machines = Vec::with_capacity(classes.len());
    for &class in &classes {
        let y: Vec<f64> = labels
            .iter()
            .map(|&l| if l == class { 1.0 } else { -1.0 })
            .collect();
        machines.push(solve_binary(rows, &y, c, kernel, tol, max_iter)?);
    }
    Ok(SvmOvr { classes, machines })
}

/// Largest KKT violation of a trained binary machine on its training set;
/// used by the verification tests.
pub fn kkt_violation(
    machine: &BinarySvm,
    rows: &[Vec<f64>],
    y: &[f64],
    alphas: Option<&[f64]>,
    c: f64,
) -> f64 {
    // Recover alphas from coefficients when not supplied: |coeff| of each
    // training row that is a support vector, 0 otherwise (exact row match).
    let alpha_of = |t: usize| -> f64 {
        if let Some(a) = alphas {
            return a[t];
        }
        machine
            .support_vectors
            .iter()
            .zip(&machine.coeffs)
            .find(|(sv, _)| sv.as_slice() == rows[t].as_slice())
            .map(|(_, &co)| co.abs())
            .unwrap_or(0.0)
    };
    let mut worst = 0.0f64;
    for t in 0..rows.len() {
        let margin = y[t] * machine.decision(&rows[t]);
        let a = alpha_of(t);
        let violation = if a <= 0.0 {
            (1.0 - margin).max(0.0)
        } else if a >= c {
            (margin - 1.0).max(0.0)
        } else {
            (margin - 1.0).abs()
        };
        worst = worst.max(violation);
    }
    worst
}
