//! The seven classifiers, audio-level majority voting, bootstrap validation,
//! and hyperparameter gridsearch.

pub mod bootstrap;
mod discriminant;
mod grid;
mod knn;
mod linalg;
pub mod svm;
mod linear;
mod tree;

pub use bootstrap::{bootstrap_audio_folds, bootstrap_row_splits, AudioFold, BootstrapConfig};
pub use grid::{gridsearch, CandidateScore, GridsearchResult, HyperGrid};
pub use svm::{Kernel, KKT_TOLERANCE};
pub use tree::best_split;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::audio::ClassLabel;
use crate::error::{Error, Result};
use crate::features::Normalizer;

/// Which of the seven classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Knn,
    Lda,
    Qda,
    Perceptron,
    Sgd,
    Svm,
    Tree,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 7] = [
        ClassifierKind::Knn,
        ClassifierKind::Lda,
        ClassifierKind::Qda,
        ClassifierKind::Perceptron,
        ClassifierKind::Sgd,
        ClassifierKind::Svm,
        ClassifierKind::Tree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::Knn => "knn",
            ClassifierKind::Lda => "lda",
            ClassifierKind::Qda => "qda",
            ClassifierKind::Perceptron => "perceptron",
            ClassifierKind::Sgd => "sgd",
            ClassifierKind::Svm => "svm",
            ClassifierKind::Tree => "tree",
        }
    }

    pub fn from_name(name: &str) -> Result<ClassifierKind> {
        let lower = name.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| Error::config(format!("unknown classifier '{name}'")))
    }
}

impl std::fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Hyperparameters, one variant per classifier kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Hyperparams {
    Knn { k: usize },
    Lda { ridge: f64 },
    Qda { ridge: f64 },
    Perceptron { learning_rate: f64, epochs: usize },
    Sgd { lambda: f64, epochs: usize },
    Svm { c: f64, kernel: Kernel },
    Tree { max_depth: Option<usize>, min_leaf: usize },
}

impl Hyperparams {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            Hyperparams::Knn { .. } => ClassifierKind::Knn,
            Hyperparams::Lda { .. } => ClassifierKind::Lda,
            Hyperparams::Qda { .. } => ClassifierKind::Qda,
            Hyperparams::Perceptron { .. } => ClassifierKind::Perceptron,
            Hyperparams::Sgd { .. } => ClassifierKind::Sgd,
            Hyperparams::Svm { .. } => ClassifierKind::Svm,
            Hyperparams::Tree { .. } => ClassifierKind::Tree,
        }
    }

    /// Sensible single-point defaults, used when no gridsearch has run.
    pub fn default_for(kind: ClassifierKind) -> Hyperparams {
        match kind {
            ClassifierKind::Knn => Hyperparams::Knn { k: 5 },
            ClassifierKind::Lda => Hyperparams::Lda { ridge: 1e-4 },
            ClassifierKind::Qda => Hyperparams::Qda { ridge: 1e-2 },
            ClassifierKind::Perceptron => Hyperparams::Perceptron {
                learning_rate: 1.0,
                epochs: 20,
            },
            ClassifierKind::Sgd => Hyperparams::Sgd {
                lambda: 1e-3,
                epochs: 30,
            },
            ClassifierKind::Svm => Hyperparams::Svm {
                c: 1.0,
                kernel: Kernel::Linear,
            },
            ClassifierKind::Tree => Hyperparams::Tree {
                max_depth: Some(10),
                min_leaf: 5,
            },
        }
    }
}

impl std::fmt::Display for Hyperparams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Hyperparams::Knn { k } => write!(f, "knn(k={k})"),
            Hyperparams::Lda { ridge } => write!(f, "lda(ridge={ridge})"),
            Hyperparams::Qda { ridge } => write!(f, "qda(ridge={ridge})"),
            Hyperparams::Perceptron {
                learning_rate,
                epochs,
            } => write!(f, "perceptron(lr={learning_rate},epochs={epochs})"),
            Hyperparams::Sgd { lambda, epochs } => {
                write!(f, "sgd(lambda={lambda},epochs={epochs})")
            }
            Hyperparams::Svm { c, kernel } => match kernel {
                Kernel::Linear => write!(f, "svm(c={c},linear)"),
                Kernel::Rbf { gamma } => write!(f, "svm(c={c},rbf,gamma={gamma})"),
            },
            Hyperparams::Tree {
                max_depth,
                min_leaf,
            } => match max_depth {
                Some(d) => write!(f, "tree(depth={d},min_leaf={min_leaf})"),
                None => write!(f, "tree(depth=inf,min_leaf={min_leaf})"),
            },
        }
    }
}

/// Window-level training data: one feature row per window with its label and
/// the parent audio it came from.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<ClassLabel>,
    pub groups: Vec<String>,
}

impl LabeledDataset {
    pub fn new(
        features: Vec<Vec<f64>>,
        labels: Vec<ClassLabel>,
        groups: Vec<String>,
    ) -> Result<LabeledDataset> {
        if features.is_empty() {
            return Err(Error::EmptyInput("LabeledDataset with no rows"));
        }
        if features.len() != labels.len() || features.len() != groups.len() {
            return Err(Error::config("features/labels/groups row counts differ"));
        }
        let dim = features[0].len();
        for row in &features {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::config("non-finite value in feature matrix"));
            }
        }
        Ok(LabeledDataset {
            features,
            labels,
            groups,
        })
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features[0].len()
    }

    pub fn distinct_classes(&self) -> usize {
        let mut seen = [false; ClassLabel::COUNT];
        for &l in &self.labels {
            seen[l.code()] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }

    pub fn select(&self, rows: &[usize]) -> LabeledDataset {
        LabeledDataset {
            features: rows.iter().map(|&r| self.features[r].clone()).collect(),
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            groups: rows.iter().map(|&r| self.groups[r].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
enum ModelParams {
    Knn(knn::KnnModel),
    Lda(discriminant::LdaModel),
    Qda(discriminant::QdaModel),
    Linear(linear::LinearOvr),
    Svm(svm::SvmOvr),
    Tree(tree::TreeModel),
}

/// A fitted classifier plus the normalizer fitted on the same training fold.
/// Prediction applies the normalizer internally.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainedModel {
    pub kind: ClassifierKind,
    pub hyperparams: Hyperparams,
    pub normalizer: Normalizer,
    params: ModelParams,
}

/// Fit one classifier on raw (unnormalized) training rows.
///
/// The normalizer is fitted here, on this data only, and stored in the model;
/// `seed` drives the epoch shuffles of the perceptron and SGD.
pub fn fit(hyperparams: &Hyperparams, train: &LabeledDataset, seed: u64) -> Result<TrainedModel> {
    if train.distinct_classes() < 2 {
        return Err(Error::config("training requires >= 2 distinct classes"));
    }
    let normalizer = Normalizer::fit(&train.features)?;
    let rows: Vec<Vec<f64>> = train
        .features
        .iter()
        .map(|r| normalizer.apply(r))
        .collect::<Result<_>>()?;
    let labels = &train.labels;

    let params = match *hyperparams {
        Hyperparams::Knn { k } => {
            if k == 0 {
                return Err(Error::config("knn k must be >= 1"));
            }
            ModelParams::Knn(knn::KnnModel {
                train: rows,
                labels: labels.clone(),
                k,
            })
        }
        Hyperparams::Lda { ridge } => ModelParams::Lda(discriminant::fit_lda(&rows, labels, ridge)?),
        Hyperparams::Qda { ridge } => ModelParams::Qda(discriminant::fit_qda(&rows, labels, ridge)?),
        Hyperparams::Perceptron {
            learning_rate,
            epochs,
        } => ModelParams::Linear(linear::fit_perceptron(
            &rows,
            labels,
            learning_rate,
            epochs,
            seed,
        )),
        Hyperparams::Sgd { lambda, epochs } => {
            ModelParams::Linear(linear::fit_sgd(&rows, labels, lambda, epochs, seed))
        }
        Hyperparams::Svm { c, kernel } => {
            ModelParams::Svm(svm::fit_svm_ovr(&rows, labels, c, kernel, svm::KKT_TOLERANCE)?)
        }
        Hyperparams::Tree {
            max_depth,
            min_leaf,
        } => ModelParams::Tree(tree::fit_tree(&rows, labels, max_depth, min_leaf)),
    };

    Ok(TrainedModel {
        kind: hyperparams.kind(),
        hyperparams: hyperparams.clone(),
        normalizer,
        params,
    })
}

fn argmax_label(scores: &[(ClassLabel, f64)]) -> ClassLabel {
    let mut best = scores[0];
    for &s in &scores[1..] {
        // Strictly greater wins; ties keep the earlier (lower-code) class.
        if s.1 > best.1 {
            best = s;
        }
    }
    best.0
}

impl TrainedModel {
    /// Predict one raw feature vector.
    pub fn predict(&self, raw: &[f64]) -> Result<ClassLabel> {
        let z = self.normalizer.apply(raw)?;
        Ok(match &self.params {
            ModelParams::Knn(m) => m.predict(&z),
            ModelParams::Lda(m) => argmax_label(&m.scores(&z)),
            ModelParams::Qda(m) => argmax_label(&m.scores(&z)),
            ModelParams::Linear(m) => argmax_label(&m.scores(&z)),
            ModelParams::Svm(m) => argmax_label(&m.scores(&z)),
            ModelParams::Tree(m) => m.predict(&z),
        })
    }

    /// Predict a batch of raw feature vectors.
    pub fn predict_batch(&self, raws: &[Vec<f64>]) -> Result<Vec<ClassLabel>> {
        raws.iter().map(|r| self.predict(r)).collect()
    }

    /// Audio-level prediction: majority vote over its windows' predictions.
    pub fn predict_audio(&self, window_rows: &[Vec<f64>]) -> Result<ClassLabel> {
        majority_vote(&self.predict_batch(window_rows)?)
    }
}

/// Most frequent label; ties break to the lowest class code.
pub fn majority_vote(labels: &[ClassLabel]) -> Result<ClassLabel> {
    if labels.is_empty() {
        return Err(Error::EmptyInput("majority_vote of no labels"));
    }
    let mut counts = [0usize; ClassLabel::COUNT];
    for &l in labels {
        counts[l.code()] += 1;
    }
    let mut best = 0;
    for c in 1..ClassLabel::COUNT {
        if counts[c] > counts[best] {
            best = c;
        }
    }
    Ok(ClassLabel::from_code(best).unwrap())
}

const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    format_version: u32,
    model: TrainedModel,
}

/// Persist a model as a versioned JSON document.
pub fn save_model(model: &TrainedModel, path: &Path) -> Result<()> {
    let doc = ModelDocument {
        format_version: MODEL_FORMAT_VERSION,
        model: model.clone(),
    };
    let json = serde_json::to_string(&doc).map_err(|e| Error::config(e.to_string()))?;
    std::fs::write(path, json).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<TrainedModel> {
    let json = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let doc: ModelDocument =
        serde_json::from_str(&json).map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
    if doc.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::config(format!(
            "unsupported model format version {}",
            doc.format_version
        )));
    }
    Ok(doc.model)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Four well-separated Gaussian blobs in 6-D.
    fn blobs(n_per: usize, seed: u64) -> LabeledDataset {
        let mut rng = crate::rng::rng_for(seed, &[]);
        let mut features = Vec::new();
        let mut labels = Vec::new();
        let mut groups = Vec::new();
        for code in 0..4 {
            for i in 0..n_per {
                let mut row = crate::augment::gaussian_noise(6, 0.15, &mut rng);
                row[code] += 6.0;
                features.push(row);
                labels.push(ClassLabel::from_code(code).unwrap());
                groups.push(format!("audio-{code}-{i}"));
            }
        }
        LabeledDataset::new(features, labels, groups).unwrap()
    }

    #[test]
    fn every_kind_separates_blobs() {
        let train = blobs(30, 1);
        for kind in ClassifierKind::ALL {
            let hp = Hyperparams::default_for(kind);
            let model = fit(&hp, &train, 11).unwrap();
            let correct = train
                .features
                .iter()
                .zip(&train.labels)
                .filter(|(x, &l)| model.predict(x).unwrap() == l)
                .count();
            assert_eq!(correct, train.len(), "{kind}: training accuracy not 100%");
        }
    }

    #[test]
    fn knn_k1_memorizes_training_set() {
        let train = blobs(10, 2);
        let model = fit(&Hyperparams::Knn { k: 1 }, &train, 0).unwrap();
        for (x, &l) in train.features.iter().zip(&train.labels) {
            assert_eq!(model.predict(x).unwrap(), l);
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let train = blobs(10, 3);
        let model = fit(&Hyperparams::default_for(ClassifierKind::Lda), &train, 0).unwrap();
        assert!(matches!(
            model.predict(&[0.0; 5]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_class_training_is_rejected() {
        let mut train = blobs(10, 4);
        train.labels.iter_mut().for_each(|l| *l = ClassLabel::Shot);
        assert!(fit(&Hyperparams::default_for(ClassifierKind::Knn), &train, 0).is_err());
    }

    #[test]
    fn majority_vote_rules() {
        use ClassLabel::*;
        assert_eq!(majority_vote(&[Shot, Shot, Casual]).unwrap(), Shot);
        assert_eq!(majority_vote(&[Alarm]).unwrap(), Alarm);
        // Tie: shot (code 0) beats casual (code 3).
        assert_eq!(majority_vote(&[Casual, Shot]).unwrap(), Shot);
        assert!(majority_vote(&[]).is_err());
    }

    #[test]
    fn model_persistence_roundtrip() {
        let train = blobs(8, 5);
        let dir = std::env::temp_dir().join("beamsed-model-tests");
        std::fs::create_dir_all(&dir).unwrap();
        for kind in ClassifierKind::ALL {
            let model = fit(&Hyperparams::default_for(kind), &train, 3).unwrap();
            let path = dir.join(format!("{kind}.json"));
            save_model(&model, &path).unwrap();
            let loaded = load_model(&path).unwrap();
            for x in &train.features {
                assert_eq!(
                    model.predict(x).unwrap(),
                    loaded.predict(x).unwrap(),
                    "{kind}"
                );
            }
        }
    }

    #[test]
    fn predictions_are_deterministic() {
        let train = blobs(15, 6);
        for kind in [ClassifierKind::Perceptron, ClassifierKind::Sgd, ClassifierKind::Svm] {
            let a = fit(&Hyperparams::default_for(kind), &train, 21).unwrap();
            let b = fit(&Hyperparams::default_for(kind), &train, 21).unwrap();
            for x in &train.features {
                assert_eq!(a.predict(x).unwrap(), b.predict(x).unwrap(), "{kind}");
            }
        }
    }
}
