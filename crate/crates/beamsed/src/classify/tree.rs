//! CART decision tree: Gini impurity, binary axis-aligned splits.

use serde::{Deserialize, Serialize};

use crate::audio::ClassLabel;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        label: ClassLabel,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeModel {
    pub nodes: Vec<TreeNode>,
}

fn gini(counts: &[usize; ClassLabel::COUNT], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    1.0 - counts
        .iter()
        .map(|&c| {
            let p = c as f64 / t;
            p * p
        })
        .sum::<f64>()
}

fn majority(counts: &[usize; ClassLabel::COUNT]) -> ClassLabel {
    let mut best = 0;
    for c in 1..ClassLabel::COUNT {
        if counts[c] > counts[best] {
            best = c;
        }
    }
    ClassLabel::from_code(best).unwrap()
}

/// The best split of `rows[indices]`: (gain, feature, threshold). Ties break
/// by lowest feature index, then lowest threshold.
pub fn best_split(
    rows: &[Vec<f64>],
    labels: &[ClassLabel],
    indices: &[usize],
    min_leaf: usize,
) -> Option<(f64, usize, f64)> {
    let n = indices.len();
    if n < 2 * min_leaf {
        return None;
    }
    let dim = rows[0].len();
    let mut parent_counts = [0usize; ClassLabel::COUNT];
    for &i in indices {
        parent_counts[labels[i].code()] += 1;
    }
    let parent_gini = gini(&parent_counts, n);

    let mut best: Option<(f64, usize, f64)> = None;
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for feature in 0..dim {
        order.clear();
        order.extend_from_slice(indices);
        order.sort_by(|&a, &b| {
            rows[a][feature]
                .partial_cmp(&rows[b][feature])
                .unwrap()
                .then(a.cmp(&b))
        });

        let mut left_counts = [0usize; ClassLabel::COUNT];
        for pos in 0..n - 1 {
            left_counts[labels[order[pos]].code()] += 1;
            let v = rows[order[pos]][feature];
            let next = rows[order[pos + 1]][feature];
            if v == next {
                continue; // threshold must separate distinct values
            }
            let n_left = pos + 1;
            let n_right = n - n_left;
            if n_left < min_leaf || n_right < min_leaf {
                continue;
            }
            let mut right_counts = [0usize; ClassLabel::COUNT];
            for c in 0..ClassLabel::COUNT {
                right_counts[c] = parent_counts[c] - left_counts[c];
            }
            let gain = parent_gini
                - (n_left as f64 * gini(&left_counts, n_left)
                    + n_right as f64 * gini(&right_counts, n_right))
                    / n as f64;
            let threshold = 0.5 * (v + next);
            let candidate = (gain, feature, threshold);
            let better = match best {
                None => true,
                Some((bg, bf, bt)) => {
                    gain > bg || (gain == bg && (feature, threshold) < (bf, bt))
                }
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    best.filter(|&(gain, _, _)| gain > 1e-12)
}

pub fn fit_tree(
    rows: &[Vec<f64>],
    labels: &[ClassLabel],
    max_depth: Option<usize>,
    min_leaf: usize,
) -> TreeModel {
    let mut nodes = Vec::new();
    let indices: Vec<usize> = (0..rows.len()).collect();
    build(rows, labels, indices, 0, max_depth, min_leaf.max(1), &mut nodes);
    TreeModel { nodes }
}

fn build(
    rows: &[Vec<f64>],
    labels: &[ClassLabel],
    indices: Vec<usize>,
    depth: usize,
    max_depth: Option<usize>,
    min_leaf: usize,
    nodes: &mut Vec<TreeNode>,
) -> usize {
    let mut counts = [0usize; ClassLabel::COUNT];
    for &i in &indices {
        counts[labels[i].code()] += 1;
    }
    let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
    let depth_reached = max_depth.map(|d| depth >= d).unwrap_or(false);

    let split = if pure || depth_reached {
        None
    } else {
        best_split(rows, labels, &indices, min_leaf)
    };

    match split {
        None => {
            nodes.push(TreeNode::Leaf {
                label: majority(&counts),
            });
            nodes.len() - 1
        }
        Some((_, feature, threshold)) => {
            let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
                .into_iter()
                .partition(|&i| rows[i][feature] <= threshold);
            let me = nodes.len();
            nodes.push(TreeNode::Leaf {
                label: ClassLabel::Shot, // placeholder, patched below
            });
            let left = build(rows, labels, left_idx, depth + 1, max_depth, min_leaf, nodes);
            let right = build(rows, labels, right_idx, depth + 1, max_depth, min_leaf, nodes);
            nodes[me] = TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            };
            me
        }
    }
}

impl TreeModel {
    pub fn predict(&self, x: &[f64]) -> ClassLabel {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                TreeNode::Leaf { label } => return *label,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], at: usize) -> usize {
            match &nodes[at] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }
}
