//! The 126-dimension per-window feature vector and its normalization.

pub mod chroma;
pub mod mel;
pub mod spectral;
pub mod stft;

use std::sync::Arc;

use rustfft::Fft;
use serde::{Deserialize, Serialize};

use crate::audio::Window;
use crate::error::{Error, Result};

pub use spectral::{rms, zero_crossing_rate};

pub const FEATURE_DIM: usize = 126;

/// Table of (name, start index, width) describing the vector layout.
pub const FEATURE_LAYOUT: [(&str, usize, usize); 15] = [
    ("rms", 0, 1),
    ("spectral_centroid", 1, 1),
    ("spectral_bandwidth", 2, 1),
    ("spectral_flatness", 3, 1),
    ("rolloff_frequency", 4, 1),
    ("zero_crossing_rate", 5, 1),
    ("mfcc", 6, 19),
    ("delta", 25, 20),
    ("delta_delta", 45, 20),
    ("mel_spectrogram", 65, 10),
    ("chromagram", 75, 12),
    ("constant_q_chromagram", 87, 12),
    ("cens", 99, 12),
    ("tonnetz", 111, 7),
    ("spectral_contrast", 118, 8),
];

/// One window's 126 features, laid out per [`FEATURE_LAYOUT`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<FeatureVector> {
        if values.len() != FEATURE_DIM {
            return Err(Error::DimensionMismatch {
                expected: FEATURE_DIM,
                found: values.len(),
            });
        }
        Ok(FeatureVector { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// The slice holding the named feature group.
    pub fn group(&self, name: &str) -> Option<&[f64]> {
        FEATURE_LAYOUT
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|&(_, start, len)| &self.values[start..start + len])
    }
}

impl std::ops::Deref for FeatureVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

/// Shared, immutable state for feature extraction: FFT plan, filterbanks,
/// constant-Q kernels. Build once, use from any number of threads.
pub struct FeatureExtractor {
    sample_rate: u32,
    window_len: usize,
    stft_params: stft::StftParams,
    fft: Arc<dyn Fft<f64>>,
    mel40: mel::MelFilterbank,
    mel10: mel::MelFilterbank,
    cqt: chroma::CqtKernels,
}

impl FeatureExtractor {
    pub fn new(sample_rate: u32) -> FeatureExtractor {
        let stft_params = stft::StftParams::default();
        let window_len = crate::audio::window_length(sample_rate, 200.0);
        let fmax = sample_rate as f64 / 2.0;
        FeatureExtractor {
            sample_rate,
            window_len,
            stft_params,
            fft: stft::plan_fft(stft_params.fft_size),
            mel40: mel::MelFilterbank::new(40, stft_params.fft_size, sample_rate, 0.0, fmax),
            mel10: mel::MelFilterbank::new(10, stft_params.fft_size, sample_rate, 0.0, fmax),
            cqt: chroma::CqtKernels::new(sample_rate, window_len),
        }
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    /// Extract the full 126-dimension vector from one full-length window.
    pub fn extract(&self, window: &Window) -> Result<FeatureVector> {
        self.extract_samples(&window.samples, window.start_sample)
    }

    pub fn extract_samples(&self, samples: &[f64], start: usize) -> Result<FeatureVector> {
        if samples.len() != self.window_len {
            return Err(Error::DimensionMismatch {
                expected: self.window_len,
                found: samples.len(),
            });
        }
        let frames = stft::stft_with(samples, self.sample_rate, self.stft_params, self.fft.as_ref())?;

        let scalars = spectral::spectral_scalars(&frames)?;
        let mfcc_traj = mel::mfcc_frames(&frames, &self.mel40, 20)?;
        let mfcc_mean = mel::mean_over_frames(&mfcc_traj);
        let (delta, delta_delta) = mel::deltas(&mfcc_traj)?;
        let mel_bands = mel::log_mel_bands(&frames, &self.mel10)?;
        let chroma_stft = chroma::chroma_stft(&frames)?;
        let chroma_cqt = chroma::chroma_cqt(samples, &self.cqt)?;
        let chroma_cens = chroma::chroma_cens(samples, &self.cqt)?;
        let tonnetz = chroma::tonnetz(&chroma_cqt)?;
        let contrast = spectral::spectral_contrast(&frames, 7, 0.02)?;

        let mut values = Vec::with_capacity(FEATURE_DIM);
        let mut push_group = |name: &str, group: &[f64]| -> Result<()> {
            for &v in group {
                if !v.is_finite() {
                    return Err(Error::NonFiniteFeature {
                        feature: name.to_string(),
                        start,
                    });
                }
                values.push(v);
            }
            Ok(())
        };

        push_group("rms", &[spectral::rms(samples)])?;
        push_group("spectral_centroid", &[scalars.centroid_hz])?;
        push_group("spectral_bandwidth", &[scalars.bandwidth_hz])?;
        push_group("spectral_flatness", &[scalars.flatness])?;
        push_group("rolloff_frequency", &[scalars.rolloff_hz])?;
        push_group("zero_crossing_rate", &[spectral::zero_crossing_rate(samples)])?;
        push_group("mfcc", &mfcc_mean[..19])?;
        push_group("delta", &delta)?;
        push_group("delta_delta", &delta_delta)?;
        push_group("mel_spectrogram", &mel_bands)?;
        push_group("chromagram", &chroma_stft)?;
        push_group("constant_q_chromagram", &chroma_cqt)?;
        push_group("cens", &chroma_cens)?;
        push_group("tonnetz", &tonnetz)?;
        push_group("spectral_contrast", &contrast)?;

        FeatureVector::new(values)
    }

    /// Features for every full window of a clip, in window order.
    pub fn extract_clip(&self, clip: &crate::audio::AudioClip) -> Result<Vec<FeatureVector>> {
        crate::audio::segment_default(clip)?
            .iter()
            .map(|w| self.extract(w))
            .collect()
    }
}

/// Per-dimension z-score transform fitted on training data only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Normalizer {
    /// Fit per-dimension mean and (population) standard deviation.
    /// Constant dimensions get a standard deviation of 1.
    pub fn fit(rows: &[Vec<f64>]) -> Result<Normalizer> {
        if rows.len() < 2 {
            return Err(Error::EmptyInput("normalizer needs >= 2 training vectors"));
        }
        let dim = rows[0].len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: rows.iter().find(|r| r.len() != dim).unwrap().len(),
            });
        }
        let n = rows.len() as f64;
        let mut mean = vec![0.0; dim];
        for row in rows {
            for (m, &v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);

        let mut var = vec![0.0; dim];
        for row in rows {
            for ((s, &v), &m) in var.iter_mut().zip(row).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let std = var
            .into_iter()
            .map(|s| {
                let sd = (s / n).sqrt();
                if sd > 0.0 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Ok(Normalizer { mean, std })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn apply(&self, vector: &[f64]) -> Result<Vec<f64>> {
        if vector.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: vector.len(),
            });
        }
        Ok(vector
            .iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(&v, (&m, &s))| (v - m) / s)
            .collect())
    }
}
