//! Audio ingestion: WAV files, normalized clips, and analysis windows.

mod dataset;
pub mod wav;

pub use dataset::{load_dataset, DatasetLoad, SkippedFile};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use wav::{read_wav_channels, write_wav_channels, BitDepth};

/// The four event classes, with stable codes 0..3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    Shot = 0,
    Explosion = 1,
    Alarm = 2,
    Casual = 3,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 4] = [
        ClassLabel::Shot,
        ClassLabel::Explosion,
        ClassLabel::Alarm,
        ClassLabel::Casual,
    ];

    pub const COUNT: usize = 4;

    pub fn code(self) -> usize {
        self as usize
    }

    pub fn from_code(code: usize) -> Option<ClassLabel> {
        Self::ALL.get(code).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassLabel::Shot => "shot",
            ClassLabel::Explosion => "explosion",
            ClassLabel::Alarm => "alarm",
            ClassLabel::Casual => "casual",
        }
    }

    pub fn from_name(name: &str) -> Result<ClassLabel> {
        match name.trim().to_ascii_lowercase().as_str() {
            "shot" => Ok(ClassLabel::Shot),
            "explosion" => Ok(ClassLabel::Explosion),
            "alarm" => Ok(ClassLabel::Alarm),
            "casual" => Ok(ClassLabel::Casual),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

impl std::fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A labeled mono waveform, samples in [-1, 1].
#[derive(Debug, Clone)]
pub struct AudioClip {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
    pub label: Option<ClassLabel>,
    pub source_id: String,
}

impl AudioClip {
    pub fn new(
        samples: Vec<f64>,
        sample_rate: u32,
        label: Option<ClassLabel>,
        source_id: impl Into<String>,
    ) -> Result<AudioClip> {
        if samples.is_empty() {
            return Err(Error::EmptyInput("AudioClip with no samples"));
        }
        if sample_rate == 0 {
            return Err(Error::config("AudioClip sample_rate must be positive"));
        }
        Ok(AudioClip {
            samples,
            sample_rate,
            label,
            source_id: source_id.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// One analysis window cut from a clip.
#[derive(Debug, Clone)]
pub struct Window {
    pub samples: Vec<f64>,
    pub start_sample: usize,
    pub parent_id: String,
}

/// Read a WAV file as a mono clip. Multichannel files are averaged down.
pub fn read_wav(path: &Path) -> Result<AudioClip> {
    let wav = read_wav_channels(path)?;
    let n = wav.channels[0].len();
    let nch = wav.channels.len() as f64;
    let samples = if wav.channels.len() == 1 {
        wav.channels.into_iter().next().unwrap()
    } else {
        (0..n)
            .map(|i| wav.channels.iter().map(|c| c[i]).sum::<f64>() / nch)
            .collect()
    };
    AudioClip::new(
        samples,
        wav.sample_rate,
        None,
        path.to_string_lossy().to_string(),
    )
}

/// Write a mono clip at the requested bit depth.
pub fn write_wav(clip: &AudioClip, path: &Path, bit_depth: BitDepth) -> Result<()> {
    write_wav_channels(
        path,
        std::slice::from_ref(&clip.samples),
        clip.sample_rate,
        bit_depth,
    )
}

/// Length in samples of an analysis window of `window_ms` at `sample_rate`.
pub fn window_length(sample_rate: u32, window_ms: f64) -> usize {
    (sample_rate as f64 * window_ms / 1000.0).round() as usize
}

/// Cut a clip into windows of `window_ms` with the given fractional overlap.
///
/// Emits windows while a full one fits; the trailing remainder is dropped so
/// every window covers the full duration. A clip shorter than one window
/// yields an empty sequence.
pub fn segment_windows(clip: &AudioClip, window_ms: f64, overlap: f64) -> Result<Vec<Window>> {
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::config(format!(
            "overlap must be in [0, 1), got {overlap}"
        )));
    }
    if window_ms <= 0.0 {
        return Err(Error::config("window_ms must be positive"));
    }
    let w = window_length(clip.sample_rate, window_ms);
    let hop = ((w as f64) * (1.0 - overlap)).round().max(1.0) as usize;

    let mut windows = Vec::new();
    let mut start = 0;
    while start + w <= clip.samples.len() {
        windows.push(Window {
            samples: clip.samples[start..start + w].to_vec(),
            start_sample: start,
            parent_id: clip.source_id.clone(),
        });
        start += hop;
    }
    Ok(windows)
}

/// Default analysis windowing: 200 ms, 50% overlap.
pub fn segment_default(clip: &AudioClip) -> Result<Vec<Window>> {
    segment_windows(clip, 200.0, 0.5)
}

pub use wav::BitDepth as WavBitDepth;
