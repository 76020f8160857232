//! Pitch-class (chroma) profiles and the tonal-centroid projection.

use std::f64::consts::PI;

use super::stft::{hann, SpectralFrame};
use crate::error::{Error, Result};

pub const NUM_CHROMA: usize = 12;

/// C1 in Hz; the constant-Q analysis spans 7 octaves upward from here.
pub const CQT_FMIN: f64 = 32.703_195_662_574_83;
pub const CQT_BINS_PER_OCTAVE: usize = 12;
pub const CQT_OCTAVES: usize = 7;

const SILENCE_EPS: f64 = 1e-12;

/// Pitch class of a frequency, folded so index 0 = C and index 9 = A (A440).
fn pitch_class(freq_hz: f64) -> usize {
    let semitones = 12.0 * (freq_hz / 440.0).log2();
    ((semitones.round() as i64).rem_euclid(12) as usize + 9) % 12
}

fn l1_normalize_or_uniform(v: &mut [f64]) {
    let total: f64 = v.iter().sum();
    let uniform = 1.0 / v.len() as f64;
    if total <= SILENCE_EPS {
        v.iter_mut().for_each(|x| *x = uniform);
    } else {
        v.iter_mut().for_each(|x| *x /= total);
    }
}

/// STFT-based chromagram: fold FFT-bin magnitudes onto 12 pitch classes
/// (A440 reference), L1-normalize per frame (silence folds to uniform), and
/// average over frames.
pub fn chroma_stft(frames: &[SpectralFrame]) -> Result<Vec<f64>> {
    if frames.is_empty() {
        return Err(Error::EmptyInput("chroma_stft needs >= 1 frame"));
    }
    let mut acc = vec![0.0; NUM_CHROMA];
    for frame in frames {
        let mut fold = vec![0.0; NUM_CHROMA];
        for k in 1..frame.num_bins() {
            fold[pitch_class(frame.bin_hz(k))] += frame.magnitudes[k];
        }
        l1_normalize_or_uniform(&mut fold);
        for (a, f) in acc.iter_mut().zip(&fold) {
            *a += f;
        }
    }
    let n = frames.len() as f64;
    Ok(acc.into_iter().map(|v| v / n).collect())
}

/// Precomputed constant-Q kernels for one window length.
///
/// One complex windowed-exponential kernel per semitone bin, centered in the
/// analysis window. Kernels whose natural length (Q periods) exceeds the
/// window are truncated to it.
#[derive(Debug, Clone)]
pub struct CqtKernels {
    /// Per bin: (start offset in the window, cos taps, sin taps).
    kernels: Vec<(usize, Vec<f64>, Vec<f64>)>,
}

impl CqtKernels {
    pub fn new(sample_rate: u32, window_len: usize) -> CqtKernels {
        let q = 1.0 / (2f64.powf(1.0 / CQT_BINS_PER_OCTAVE as f64) - 1.0);
        let n_bins = CQT_BINS_PER_OCTAVE * CQT_OCTAVES;
        let mut kernels = Vec::with_capacity(n_bins);
        for j in 0..n_bins {
            let freq = CQT_FMIN * 2f64.powf(j as f64 / CQT_BINS_PER_OCTAVE as f64);
            let natural = (q * sample_rate as f64 / freq).round() as usize;
            let len = natural.clamp(2, window_len);
            let start = (window_len - len) / 2;
            let mut cos_taps = Vec::with_capacity(len);
            let mut sin_taps = Vec::with_capacity(len);
            let norm: f64 = (0..len).map(|i| hann(i, len)).sum();
            for i in 0..len {
                let t = i as f64 - (len as f64 - 1.0) / 2.0;
                let phase = 2.0 * PI * freq * t / sample_rate as f64;
                let w = hann(i, len) / norm;
                cos_taps.push(w * phase.cos());
                sin_taps.push(w * phase.sin());
            }
            kernels.push((start, cos_taps, sin_taps));
        }
        CqtKernels { kernels }
    }

    /// Constant-Q magnitudes of one full analysis window.
    pub fn magnitudes(&self, window: &[f64]) -> Vec<f64> {
        self.kernels
            .iter()
            .map(|(start, cos_taps, sin_taps)| {
                let mut re = 0.0;
                let mut im = 0.0;
                for (i, (&c, &s)) in cos_taps.iter().zip(sin_taps).enumerate() {
                    let x = window.get(start + i).copied().unwrap_or(0.0);
                    re += x * c;
                    im += x * s;
                }
                (re * re + im * im).sqrt()
            })
            .collect()
    }
}

/// Constant-Q chromagram: CQT magnitudes folded mod 12, L1-normalized
/// (silence folds to uniform).
pub fn chroma_cqt(window: &[f64], kernels: &CqtKernels) -> Result<Vec<f64>> {
    if window.is_empty() {
        return Err(Error::EmptyInput("chroma_cqt of empty window"));
    }
    let mags = kernels.magnitudes(window);
    let mut fold = vec![0.0; NUM_CHROMA];
    for (j, &m) in mags.iter().enumerate() {
        fold[j % NUM_CHROMA] += m;
    }
    l1_normalize_or_uniform(&mut fold);
    Ok(fold)
}

/// Chroma Energy Normalized: quantize the L1-normalized constant-Q chroma
/// with the standard 4-level thresholds, then L2-normalize.
///
/// The analysis window yields a single chroma vector, so the temporal
/// smoothing and downsampling stages of the usual frame-sequence formulation
/// degenerate to the identity here.
pub fn chroma_cens(window: &[f64], kernels: &CqtKernels) -> Result<Vec<f64>> {
    let chroma = chroma_cqt(window, kernels)?;
    let thresholds = [0.05, 0.1, 0.2, 0.4];
    let mut quantized: Vec<f64> = chroma
        .iter()
        .map(|&v| thresholds.iter().filter(|&&t| v > t).count() as f64)
        .collect();
    let norm: f64 = quantized.iter().map(|&v| v * v).sum::<f64>().sqrt();
    if norm <= SILENCE_EPS {
        quantized
            .iter_mut()
            .for_each(|v| *v = 1.0 / (NUM_CHROMA as f64).sqrt());
    } else {
        quantized.iter_mut().for_each(|v| *v /= norm);
    }
    Ok(quantized)
}

/// Tonal-centroid projection matrix: fifths, minor thirds, and major thirds,
/// each as a sin/cos pair (radii 1, 1, 0.5).
fn tonnetz_matrix() -> [[f64; NUM_CHROMA]; 6] {
    let mut m = [[0.0; NUM_CHROMA]; 6];
    for (p, col) in (0..NUM_CHROMA).enumerate() {
        let p = p as f64;
        let fifths = p * 7.0 * PI / 6.0;
        let minor = p * 3.0 * PI / 2.0;
        let major = p * 2.0 * PI / 3.0;
        m[0][col] = fifths.sin();
        m[1][col] = fifths.cos();
        m[2][col] = minor.sin();
        m[3][col] = minor.cos();
        m[4][col] = 0.5 * major.sin();
        m[5][col] = 0.5 * major.cos();
    }
    m
}

/// Six-dimensional tonal centroid of an L1-normalized chroma vector, plus the
/// centroid's L2 norm as a seventh entry. All-zero chroma maps to all zeros.
pub fn tonnetz(chroma: &[f64]) -> Result<Vec<f64>> {
    if chroma.len() != NUM_CHROMA {
        return Err(Error::DimensionMismatch {
            expected: NUM_CHROMA,
            found: chroma.len(),
        });
    }
    if chroma.iter().any(|&v| v < 0.0) {
        return Err(Error::config("tonnetz requires non-negative chroma"));
    }
    let total: f64 = chroma.iter().sum();
    if total <= SILENCE_EPS {
        return Ok(vec![0.0; 7]);
    }
    let m = tonnetz_matrix();
    let mut out = vec![0.0; 7];
    for d in 0..6 {
        out[d] = chroma
            .iter()
            .enumerate()
            .map(|(p, &c)| m[d][p] * c / total)
            .sum();
    }
    out[6] = out[..6].iter().map(|&v| v * v).sum::<f64>().sqrt();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::stft::{stft, StftParams};

    const A_INDEX: usize = 9;

    fn tone(n: usize, freq: f64) -> Vec<f64> {
        (0..n).map(|i| (2.0 * PI * freq * i as f64 / 16000.0).sin()).collect()
    }

    fn argmax(v: &[f64]) -> usize {
        v.iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0
    }

    #[test]
    fn pitch_class_reference_points() {
        assert_eq!(pitch_class(440.0), A_INDEX);
        assert_eq!(pitch_class(880.0), A_INDEX);
        assert_eq!(pitch_class(261.63), 0); // C4
        assert_eq!(pitch_class(523.25), 0); // C5
    }

    #[test]
    fn a440_is_argmax_in_all_three_variants() {
        let samples = tone(3200, 440.0);
        let frames = stft(&samples, 16000, StftParams::default()).unwrap();
        let kernels = CqtKernels::new(16000, 3200);

        assert_eq!(argmax(&chroma_stft(&frames).unwrap()), A_INDEX);
        assert_eq!(argmax(&chroma_cqt(&samples, &kernels).unwrap()), A_INDEX);
        assert_eq!(argmax(&chroma_cens(&samples, &kernels).unwrap()), A_INDEX);
    }

    #[test]
    fn octave_transposition_keeps_argmax() {
        let kernels = CqtKernels::new(16000, 3200);
        for freq in [220.0, 440.0, 880.0, 1760.0] {
            let samples = tone(3200, freq);
            assert_eq!(
                argmax(&chroma_cqt(&samples, &kernels).unwrap()),
                A_INDEX,
                "freq {freq}"
            );
            let frames = stft(&samples, 16000, StftParams::default()).unwrap();
            assert_eq!(argmax(&chroma_stft(&frames).unwrap()), A_INDEX, "freq {freq}");
        }
    }

    #[test]
    fn cens_has_unit_l2_norm() {
        let kernels = CqtKernels::new(16000, 3200);
        for samples in [tone(3200, 440.0), tone(3200, 523.25), vec![0.0; 3200]] {
            let cens = chroma_cens(&samples, &kernels).unwrap();
            let norm: f64 = cens.iter().map(|&v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-9, "norm {norm}");
        }
    }

    #[test]
    fn silence_folds_to_uniform_chroma() {
        let samples = vec![0.0; 3200];
        let frames = stft(&samples, 16000, StftParams::default()).unwrap();
        let kernels = CqtKernels::new(16000, 3200);
        for chroma in [
            chroma_stft(&frames).unwrap(),
            chroma_cqt(&samples, &kernels).unwrap(),
        ] {
            for &v in &chroma {
                assert!((v - 1.0 / 12.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn uniform_chroma_has_zero_tonnetz() {
        let t = tonnetz(&vec![1.0 / 12.0; 12]).unwrap();
        for (d, &v) in t.iter().enumerate() {
            assert!(v.abs() < 1e-12, "dim {d}: {v}");
        }
    }

    #[test]
    fn single_pitch_class_reads_projection_column() {
        let m = tonnetz_matrix();
        for k in 0..12 {
            let mut chroma = vec![0.0; 12];
            chroma[k] = 2.5; // L1 normalization divides this out
            let t = tonnetz(&chroma).unwrap();
            for d in 0..6 {
                assert!((t[d] - m[d][k]).abs() < 1e-12, "class {k} dim {d}");
            }
            let norm: f64 = (0..6).map(|d| m[d][k] * m[d][k]).sum::<f64>().sqrt();
            assert!((t[6] - norm).abs() < 1e-12);
        }
    }

    #[test]
    fn full_rotation_is_identity() {
        let chroma: Vec<f64> = (0..12).map(|i| (i as f64 + 1.0) / 78.0).collect();
        let rotated: Vec<f64> = (0..12).map(|i| chroma[(i + 12) % 12]).collect();
        assert_eq!(tonnetz(&chroma).unwrap(), tonnetz(&rotated).unwrap());
    }

    #[test]
    fn zero_chroma_gives_zero_tonnetz() {
        let t = tonnetz(&vec![0.0; 12]).unwrap();
        assert!(t.iter().all(|&v| v == 0.0));
    }
}
