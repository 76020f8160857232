//! Exhaustive hyperparameter search scored by bootstrap audio-level accuracy.

use serde::{Deserialize, Serialize};

use super::bootstrap::{bootstrap_row_splits, BootstrapConfig};
use super::{fit, majority_vote, ClassifierKind, Hyperparams, Kernel, LabeledDataset};
use crate::audio::ClassLabel;
use crate::error::{Error, Result};
use crate::par::map_index;
use crate::rng::{derive_seed, domain};

/// Candidate value lists per classifier kind. The defaults are the search
/// space used throughout; a config file can override any of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HyperGrid {
    pub knn_k: Vec<usize>,
    pub lda_ridge: Vec<f64>,
    pub qda_ridge: Vec<f64>,
    pub perceptron_learning_rate: Vec<f64>,
    pub perceptron_epochs: Vec<usize>,
    pub sgd_lambda: Vec<f64>,
    pub sgd_epochs: Vec<usize>,
    pub svm_c: Vec<f64>,
    pub svm_rbf_gamma: Vec<f64>,
    pub svm_linear: bool,
    pub tree_max_depth: Vec<Option<usize>>,
    pub tree_min_leaf: Vec<usize>,
}

impl Default for HyperGrid {
    fn default() -> Self {
        HyperGrid {
            knn_k: vec![1, 3, 5, 7, 11],
            lda_ridge: vec![1e-6, 1e-4, 1e-2],
            qda_ridge: vec![1e-6, 1e-4, 1e-2],
            perceptron_learning_rate: vec![0.1, 1.0],
            perceptron_epochs: vec![10, 50],
            sgd_lambda: vec![1e-5, 1e-4, 1e-3],
            sgd_epochs: vec![20, 50],
            svm_c: vec![0.1, 1.0, 10.0],
            svm_rbf_gamma: vec![1.0 / 126.0, 0.01, 0.1],
            svm_linear: true,
            tree_max_depth: vec![Some(5), Some(10), Some(20), None],
            tree_min_leaf: vec![1, 5, 20],
        }
    }
}

impl HyperGrid {
    /// The candidate list for one kind, in deterministic enumeration order.
    pub fn candidates(&self, kind: ClassifierKind) -> Vec<Hyperparams> {
        let mut out = Vec::new();
        match kind {
            ClassifierKind::Knn => {
                for &k in &self.knn_k {
                    out.push(Hyperparams::Knn { k });
                }
            }
            ClassifierKind::Lda => {
                for &ridge in &self.lda_ridge {
                    out.push(Hyperparams::Lda { ridge });
                }
            }
            ClassifierKind::Qda => {
                for &ridge in &self.qda_ridge {
                    out.push(Hyperparams::Qda { ridge });
                }
            }
            ClassifierKind::Perceptron => {
                for &learning_rate in &self.perceptron_learning_rate {
                    for &epochs in &self.perceptron_epochs {
                        out.push(Hyperparams::Perceptron {
                            learning_rate,
                            epochs,
                        });
                    }
                }
            }
            ClassifierKind::Sgd => {
                for &lambda in &self.sgd_lambda {
                    for &epochs in &self.sgd_epochs {
                        out.push(Hyperparams::Sgd { lambda, epochs });
                    }
                }
            }
            ClassifierKind::Svm => {
                for &c in &self.svm_c {
                    if self.svm_linear {
                        out.push(Hyperparams::Svm {
                            c,
                            kernel: Kernel::Linear,
                        });
                    }
                    for &gamma in &self.svm_rbf_gamma {
                        out.push(Hyperparams::Svm {
                            c,
                            kernel: Kernel::Rbf { gamma },
                        });
                    }
                }
            }
            ClassifierKind::Tree => {
                for &max_depth in &self.tree_max_depth {
                    for &min_leaf in &self.tree_min_leaf {
                        out.push(Hyperparams::Tree {
                            max_depth,
                            min_leaf,
                        });
                    }
                }
            }
        }
        out
    }
}

/// One candidate's bootstrap score.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CandidateScore {
    pub hyperparams: Hyperparams,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub fold_accuracies: Vec<f64>,
    pub failed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridsearchResult {
    pub kind: ClassifierKind,
    pub best: Hyperparams,
    pub table: Vec<CandidateScore>,
}

/// Audio-level accuracy: group test rows by parent audio, majority-vote each
/// audio, score against its label.
pub fn audio_accuracy(
    model: &super::TrainedModel,
    dataset: &LabeledDataset,
    rows: &[usize],
) -> Result<f64> {
    if rows.is_empty() {
        return Err(Error::EmptyInput("accuracy over no test rows"));
    }
    // Group rows by audio, preserving first-appearance order.
    let mut audios: Vec<(&str, ClassLabel, Vec<usize>)> = Vec::new();
    for &r in rows {
        let g = dataset.groups[r].as_str();
        match audios.iter_mut().find(|(id, _, _)| *id == g) {
            Some((_, _, members)) => members.push(r),
            None => audios.push((g, dataset.labels[r], vec![r])),
        }
    }
    let mut correct = 0;
    for (_, label, members) in &audios {
        let votes: Vec<ClassLabel> = members
            .iter()
            .map(|&r| model.predict(&dataset.features[r]))
            .collect::<Result<_>>()?;
        if majority_vote(&votes)? == *label {
            correct += 1;
        }
    }
    Ok(correct as f64 / audios.len() as f64)
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Exhaustive search over the kind's grid. Each candidate is scored by mean
/// audio-level accuracy over the bootstrap folds; failed fits mark the
/// candidate failed and the search continues. Ties go to the earlier
/// candidate in grid order.
pub fn gridsearch(
    kind: ClassifierKind,
    grid: &HyperGrid,
    dataset: &LabeledDataset,
    cfg: &BootstrapConfig,
) -> Result<GridsearchResult> {
    let candidates = grid.candidates(kind);
    if candidates.is_empty() {
        return Err(Error::config(format!("empty grid for {kind}")));
    }
    let splits = bootstrap_row_splits(&dataset.groups, &dataset.labels, cfg)?;

    // All (candidate, fold) cells run independently with derived seeds.
    let n_folds = splits.len();
    let jobs = candidates.len() * n_folds;
    let cells: Vec<std::result::Result<f64, String>> = map_index(jobs, |j| {
        let cand = j / n_folds;
        let fold = j % n_folds;
        let (train_rows, test_rows) = &splits[fold];
        let train = dataset.select(train_rows);
        let seed = derive_seed(cfg.seed, &[domain::FIT, cand as u64, fold as u64]);
        fit(&candidates[cand], &train, seed)
            .and_then(|model| audio_accuracy(&model, dataset, test_rows))
            .map_err(|e| e.to_string())
    });

    let mut table = Vec::with_capacity(candidates.len());
    for (cand, hp) in candidates.iter().enumerate() {
        let fold_results = &cells[cand * n_folds..(cand + 1) * n_folds];
        let failure = fold_results.iter().find_map(|r| r.as_ref().err());
        match failure {
            Some(err) => table.push(CandidateScore {
                hyperparams: hp.clone(),
                mean_accuracy: f64::NAN,
                std_accuracy: f64::NAN,
                fold_accuracies: vec![],
                failed: true,
                error: Some(err.clone()),
            }),
            None => {
                let accs: Vec<f64> = fold_results.iter().map(|r| *r.as_ref().unwrap()).collect();
                let (mean, std) = mean_std(&accs);
                table.push(CandidateScore {
                    hyperparams: hp.clone(),
                    mean_accuracy: mean,
                    std_accuracy: std,
                    fold_accuracies: accs,
                    failed: false,
                    error: None,
                });
            }
        }
    }

    // Strictly-greater replacement keeps the earliest candidate on ties.
    let mut best: Option<&CandidateScore> = None;
    for c in table.iter().filter(|c| !c.failed) {
        if best.map(|b| c.mean_accuracy > b.mean_accuracy).unwrap_or(true) {
            best = Some(c);
        }
    }
    let best = best.ok_or_else(|| Error::config(format!("every {kind} candidate failed")))?;

    Ok(GridsearchResult {
        kind,
        best: best.hyperparams.clone(),
        table,
    })
}
