//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: not a RIFF/WAVE file ({detail})")]
    NotWav { path: PathBuf, detail: String },

    #[error("{path}: non-PCM encoding (format tag {format_tag})")]
    NonPcm { path: PathBuf, format_tag: u16 },

    #[error("{path}: unsupported bit depth {bits} (only 8-bit unsigned and 16-bit signed PCM)")]
    UnsupportedBitDepth { path: PathBuf, bits: u16 },

    #[error("{path}: zero-length audio payload")]
    EmptyPayload { path: PathBuf },

    #[error("{path}: sample rate {found} Hz, expected {expected} Hz")]
    SampleRateMismatch {
        path: PathBuf,
        expected: u32,
        found: u32,
    },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("silent clip {source_id}: SNR is undefined for zero signal power")]
    SilentClip { source_id: String },

    #[error("delay of {delay} samples exceeds signal length {len}")]
    DelayTooLarge { delay: f64, len: usize },

    #[error("channel length mismatch: {0:?}")]
    ChannelLengthMismatch(Vec<usize>),

    #[error("non-finite value in feature '{feature}' (window starting at sample {start})")]
    NonFiniteFeature { feature: String, start: usize },

    #[error("feature vector has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("covariance matrix is singular; increase the ridge regularizer")]
    SingularCovariance,

    #[error("SMO did not converge within {iterations} iterations (max violation {violation:.3e})")]
    SmoNonConvergence { iterations: usize, violation: f64 },

    #[error("adaptive filter diverged: non-finite weight at sample {sample} (step size too large?)")]
    LmsDivergence { sample: usize },

    #[error("bootstrap could not draw a training fold containing every class after {attempts} attempts")]
    BootstrapClassMissing { attempts: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown class label '{0}' (expected shot, explosion, alarm, or casual)")]
    UnknownLabel(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
