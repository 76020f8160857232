//! One-vs-rest linear models: the classic perceptron and hinge-loss SGD.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::audio::ClassLabel;
use crate::rng::rng_for;

/// One linear score per class: `score_c(x) = w_c . x + b_c`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearOvr {
    pub classes: Vec<ClassLabel>,
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl LinearOvr {
    pub fn scores(&self, x: &[f64]) -> Vec<(ClassLabel, f64)> {
        self.classes
            .iter()
            .zip(self.weights.iter().zip(&self.bias))
            .map(|(&label, (w, &b))| {
                (label, w.iter().zip(x).map(|(&wi, &xi)| wi * xi).sum::<f64>() + b)
            })
            .collect()
    }
}

fn present_classes(labels: &[ClassLabel]) -> Vec<ClassLabel> {
    ClassLabel::ALL
        .into_iter()
        .filter(|l| labels.contains(l))
        .collect()
}

/// Classic perceptron, one binary machine per class, updating on mistakes
/// only. Data is reshuffled each epoch with a seeded RNG.
pub fn fit_perceptron(
    rows: &[Vec<f64>],
    labels: &[ClassLabel],
    learning_rate: f64,
    epochs: usize,
    seed: u64,
) -> LinearOvr {
    let dim = rows[0].len();
    let classes = present_classes(labels);
    let mut weights = vec![vec![0.0; dim]; classes.len()];
    let mut bias = vec![0.0; classes.len()];

    let mut order: Vec<usize> = (0..rows.len()).collect();
    let mut rng = rng_for(seed, &[]);
    for _ in 0..epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let x = &rows[i];
            for (c, &class) in classes.iter().enumerate() {
                let y = if labels[i] == class { 1.0 } else { -1.0 };
                let score: f64 =
                    weights[c].iter().zip(x).map(|(&w, &v)| w * v).sum::<f64>() + bias[c];
                if y * score <= 0.0 {
                    for (w, &v) in weights[c].iter_mut().zip(x) {
                        *w += learning_rate * y * v;
                    }
                    bias[c] += learning_rate * y;
                }
            }
        }
    }
    LinearOvr {
        classes,
        weights,
        bias,
    }
}

/// Hinge loss + L2 by stochastic gradient descent with the 1/(lambda t) step
/// schedule and projection onto the ball of radius 1/sqrt(lambda); the bias
/// is left unregularized.
pub fn fit_sgd(
    rows: &[Vec<f64>],
    labels: &[ClassLabel],
    lambda: f64,
    epochs: usize,
    seed: u64,
) -> LinearOvr {
    let dim = rows[0].len();
    let classes = present_classes(labels);
    let mut weights = vec![vec![0.0; dim]; classes.len()];
    let mut bias = vec![0.0; classes.len()];
    let radius2 = 1.0 / lambda;

    let mut order: Vec<usize> = (0..rows.len()).collect();
    let mut rng = rng_for(seed, &[]);
    let mut t = 0u64;
    for _ in 0..epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (lambda * t as f64);
            let x = &rows[i];
            for (c, &class) in classes.iter().enumerate() {
                let y = if labels[i] == class { 1.0 } else { -1.0 };
                let margin = y
                    * (weights[c].iter().zip(x).map(|(&w, &v)| w * v).sum::<f64>() + bias[c]);
                let shrink = 1.0 - (eta * lambda).min(1.0);
                if margin < 1.0 {
                    for (w, &v) in weights[c].iter_mut().zip(x) {
                        *w = *w * shrink + eta * y * v;
                    }
                    bias[c] += eta * y;
                } else {
                    for w in weights[c].iter_mut() {
                        *w *= shrink;
                    }
                }
                let norm2: f64 = weights[c].iter().map(|&w| w * w).sum();
                if norm2 > radius2 {
                    let scale = (radius2 / norm2).sqrt();
                    for w in weights[c].iter_mut() {
                        *w *= scale;
                    }
                }
            }
        }
    }
    LinearOvr {
        classes,
        weights,
        bias,
    }
}
