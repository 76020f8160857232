//! K-nearest-neighbors with exhaustive Euclidean search.

use serde::{Deserialize, Serialize};

use crate::audio::ClassLabel;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KnnModel {
    pub train: Vec<Vec<f64>>,
    pub labels: Vec<ClassLabel>,
    pub k: usize,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

impl KnnModel {
    /// Majority label among the `k` nearest training rows. Distance ties
    /// break by lower row index, vote ties by lowest class code.
    pub fn predict(&self, query: &[f64]) -> ClassLabel {
        let mut scored: Vec<(f64, usize)> = self
            .train
            .iter()
            .enumerate()
            .map(|(i, row)| (squared_distance(row, query), i))
            .collect();
        let k = self.k.min(scored.len());
        let cmp = |a: &(f64, usize), b: &(f64, usize)| {
            a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1))
        };
        if k < scored.len() {
            scored.select_nth_unstable_by(k - 1, cmp);
        }
        let mut counts = [0usize; ClassLabel::COUNT];
        for &(_, idx) in &scored[..k] {
            counts[self.labels[idx].code()] += 1;
        }
        let mut best = 0;
        for c in 1..ClassLabel::COUNT {
            if counts[c] > counts[best] {
                best = c;
            }
        }
        ClassLabel::from_code(best).unwrap()
    }
}
