//! Bootstrap train/test splits at the audio level.
//!
//! Windows of one audio are near-duplicates of each other; splitting at the
//! window level would leak them between train and test. Audios are sampled
//! with replacement until the target number of distinct ones is reached; the
//! out-of-bag audios form the test set.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::audio::ClassLabel;
use crate::error::{Error, Result};
use crate::rng::{domain, rng_for};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub repetitions: usize,
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            repetitions: 10,
            train_fraction: 0.8,
            seed: 0,
        }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::config("bootstrap repetitions must be >= 1"));
        }
        if !(0.0..1.0).contains(&self.train_fraction) || self.train_fraction <= 0.0 {
            return Err(Error::config("train_fraction must be in (0, 1)"));
        }
        Ok(())
    }
}

/// One train/test split over audio indices.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioFold {
    pub train_audios: Vec<usize>,
    pub test_audios: Vec<usize>,
}

const MAX_ATTEMPTS: usize = 100;

/// Bootstrap folds over `labels[i]` = label of audio `i`. Every class present
/// in the dataset must land in each training fold; a fold violating that is
/// redrawn (up to 100 attempts).
pub fn bootstrap_audio_folds(labels: &[ClassLabel], cfg: &BootstrapConfig) -> Result<Vec<AudioFold>> {
    cfg.validate()?;
    let n = labels.len();
    if n < 2 {
        return Err(Error::EmptyInput("bootstrap needs >= 2 audios"));
    }
    let target = ((cfg.train_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let mut class_present = [false; ClassLabel::COUNT];
    for &l in labels {
        class_present[l.code()] = true;
    }

    let mut folds = Vec::with_capacity(cfg.repetitions);
    for rep in 0..cfg.repetitions {
        let mut fold = None;
        for attempt in 0..MAX_ATTEMPTS {
            let mut rng = rng_for(cfg.seed, &[domain::FOLDS, rep as u64, attempt as u64]);
            let mut drawn = vec![false; n];
            let mut distinct = 0;
            while distinct < target {
                let pick = rng.random_range(0..n);
                if !drawn[pick] {
                    drawn[pick] = true;
                    distinct += 1;
                }
            }
            let mut train_classes = [false; ClassLabel::COUNT];
            for (i, &d) in drawn.iter().enumerate() {
                if d {
                    train_classes[labels[i].code()] = true;
                }
            }
            let ok = (0..ClassLabel::COUNT).all(|c| !class_present[c] || train_classes[c]);
            if ok {
                let train_audios: Vec<usize> =
                    (0..n).filter(|&i| drawn[i]).collect();
                let test_audios: Vec<usize> = (0..n).filter(|&i| !drawn[i]).collect();
                fold = Some(AudioFold {
                    train_audios,
                    test_audios,
                });
                break;
            }
        }
        folds.push(fold.ok_or(Error::BootstrapClassMissing {
            attempts: MAX_ATTEMPTS,
        })?);
    }
    Ok(folds)
}

/// Unique audios of a window-level dataset, in order of first appearance,
/// with their labels.
pub fn unique_audios(groups: &[String], labels: &[ClassLabel]) -> (Vec<String>, Vec<ClassLabel>) {
    let mut ids = Vec::new();
    let mut audio_labels = Vec::new();
    for (g, &l) in groups.iter().zip(labels) {
        if ids.last().map(|last| last != g).unwrap_or(true) && !ids.contains(g) {
            ids.push(g.clone());
            audio_labels.push(l);
        }
    }
    (ids, audio_labels)
}

/// Row-level bootstrap splits for a window dataset: audios are sampled, and
/// every window follows its parent audio.
pub fn bootstrap_row_splits(
    groups: &[String],
    labels: &[ClassLabel],
    cfg: &BootstrapConfig,
) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let (ids, audio_labels) = unique_audios(groups, labels);
    let folds = bootstrap_audio_folds(&audio_labels, cfg)?;
    let index_of: std::collections::HashMap<&str, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    Ok(folds
        .into_iter()
        .map(|fold| {
            let in_train: Vec<bool> = {
                let mut v = vec![false; ids.len()];
                for &a in &fold.train_audios {
                    v[a] = true;
                }
                v
            };
            let mut train_rows = Vec::new();
            let mut test_rows = Vec::new();
            for (row, g) in groups.iter().enumerate() {
                if in_train[index_of[g.as_str()]] {
                    train_rows.push(row);
                } else {
                    test_rows.push(row);
                }
            }
            (train_rows, test_rows)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n_per_class: usize) -> Vec<ClassLabel> {
        let mut out = Vec::new();
        for label in ClassLabel::ALL {
            out.extend(std::iter::repeat(label).take(n_per_class));
        }
        out
    }

    #[test]
    fn fold_count_and_oob_property() {
        let labels = labels(10);
        let cfg = BootstrapConfig {
            repetitions: 10,
            train_fraction: 0.8,
            seed: 5,
        };
        let folds = bootstrap_audio_folds(&labels, &cfg).unwrap();
        assert_eq!(folds.len(), 10);
        for fold in &folds {
            assert_eq!(fold.train_audios.len(), 32);
            assert_eq!(fold.test_audios.len(), 8);
            for a in &fold.test_audios {
                assert!(!fold.train_audios.contains(a));
            }
            // Every class reaches the training fold.
            for class in ClassLabel::ALL {
                assert!(fold.train_audios.iter().any(|&i| labels[i] == class));
            }
        }
    }

    #[test]
    fn folds_are_seed_deterministic() {
        let labels = labels(8);
        let cfg = BootstrapConfig {
            repetitions: 4,
            train_fraction: 0.75,
            seed: 9,
        };
        assert_eq!(
            bootstrap_audio_folds(&labels, &cfg).unwrap(),
            bootstrap_audio_folds(&labels, &cfg).unwrap()
        );
    }

    #[test]
    fn row_splits_follow_parent_audio() {
        // 3 audios with 2, 3, 1 windows.
        let groups: Vec<String> = ["a", "a", "b", "b", "b", "c"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let labels = vec![
            ClassLabel::Shot,
            ClassLabel::Shot,
            ClassLabel::Casual,
            ClassLabel::Casual,
            ClassLabel::Casual,
            ClassLabel::Shot,
        ];
        let cfg = BootstrapConfig {
            repetitions: 6,
            train_fraction: 0.67,
            seed: 3,
        };
        let splits = bootstrap_row_splits(&groups, &labels, &cfg).unwrap();
        for (train_rows, test_rows) in &splits {
            assert_eq!(train_rows.len() + test_rows.len(), 6);
            // No audio straddles the split.
            for rows in [train_rows, test_rows] {
                for &r in rows.iter() {
                    let g = &groups[r];
                    let all_here = groups
                        .iter()
                        .enumerate()
                        .filter(|(_, gg)| gg == &g)
                        .all(|(i, _)| rows.contains(&i));
                    assert!(all_here, "audio {g} split across folds");
                }
            }
        }
    }

    #[test]
    fn impossible_class_coverage_errors() {
        // 2 audios, 2 classes, train target 1 -> one class always missing.
        let labels = vec![ClassLabel::Shot, ClassLabel::Casual];
        let cfg = BootstrapConfig {
            repetitions: 1,
            train_fraction: 0.5,
            seed: 1,
        };
        assert!(matches!(
            bootstrap_audio_folds(&labels, &cfg),
            Err(Error::BootstrapClassMissing { .. })
        ));
    }
}
