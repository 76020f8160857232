//! Scalar spectral descriptors and spectral contrast.

use super::stft::SpectralFrame;
use crate::error::{Error, Result};

pub const MAG_FLOOR: f64 = 1e-10;

/// Per-window scalar descriptors (each the mean of per-frame values).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralScalars {
    pub centroid_hz: f64,
    pub bandwidth_hz: f64,
    pub flatness: f64,
    pub rolloff_hz: f64,
}

/// Root mean square of the time-domain window.
pub fn rms(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    (samples.iter().map(|&x| x * x).sum::<f64>() / samples.len() as f64).sqrt()
}

/// Fraction of consecutive sample pairs that change sign; zeros count as
/// positive.
pub fn zero_crossing_rate(samples: &[f64]) -> f64 {
    if samples.len() < 2 {
        return 0.0;
    }
    let sign = |x: f64| x >= 0.0;
    let changes = samples
        .windows(2)
        .filter(|p| sign(p[0]) != sign(p[1]))
        .count();
    changes as f64 / (samples.len() - 1) as f64
}

fn frame_scalars(frame: &SpectralFrame) -> SpectralScalars {
    let mags = &frame.magnitudes;
    let total: f64 = mags.iter().sum();

    if total <= 0.0 {
        // All-zero frame: centroid/bandwidth/rolloff are 0 and flatness is 1
        // by convention.
        return SpectralScalars {
            centroid_hz: 0.0,
            bandwidth_hz: 0.0,
            flatness: 1.0,
            rolloff_hz: 0.0,
        };
    }

    // Flatness = geometric mean / arithmetic mean of floored magnitudes.
    let floored: Vec<f64> = mags.iter().map(|&m| m.max(MAG_FLOOR)).collect();
    let log_mean = floored.iter().map(|&m| m.ln()).sum::<f64>() / floored.len() as f64;
    let arith = floored.iter().sum::<f64>() / floored.len() as f64;
    let flatness = log_mean.exp() / arith;

    let centroid = mags
        .iter()
        .enumerate()
        .map(|(k, &m)| frame.bin_hz(k) * m)
        .sum::<f64>()
        / total;
    let bandwidth = (mags
        .iter()
        .enumerate()
        .map(|(k, &m)| m * (frame.bin_hz(k) - centroid).powi(2))
        .sum::<f64>()
        / total)
        .sqrt();

    let threshold = 0.85 * total;
    let mut cum = 0.0;
    let mut rolloff = frame.bin_hz(mags.len() - 1);
    for (k, &m) in mags.iter().enumerate() {
        cum += m;
        if cum >= threshold {
            rolloff = frame.bin_hz(k);
            break;
        }
    }

    SpectralScalars {
        centroid_hz: centroid,
        bandwidth_hz: bandwidth,
        flatness,
        rolloff_hz: rolloff,
    }
}

/// Mean over frames of the per-frame scalars.
pub fn spectral_scalars(frames: &[SpectralFrame]) -> Result<SpectralScalars> {
    if frames.is_empty() {
        return Err(Error::EmptyInput("spectral_scalars needs >= 1 frame"));
    }
    let mut acc = SpectralScalars {
        centroid_hz: 0.0,
        bandwidth_hz: 0.0,
        flatness: 0.0,
        rolloff_hz: 0.0,
    };
    for frame in frames {
        let s = frame_scalars(frame);
        acc.centroid_hz += s.centroid_hz;
        acc.bandwidth_hz += s.bandwidth_hz;
        acc.flatness += s.flatness;
        acc.rolloff_hz += s.rolloff_hz;
    }
    let n = frames.len() as f64;
    Ok(SpectralScalars {
        centroid_hz: acc.centroid_hz / n,
        bandwidth_hz: acc.bandwidth_hz / n,
        flatness: acc.flatness / n,
        rolloff_hz: acc.rolloff_hz / n,
    })
}

/// Octave band layout for spectral contrast: the region below `fmin` plus
/// `n_bands` octave-spaced bands. Bands beyond Nyquist stay empty and report
/// a contrast of 0.
pub(crate) fn contrast_band_bins(
    num_bins: usize,
    fft_size: usize,
    sample_rate: u32,
    fmin: f64,
    n_bands: usize,
) -> Vec<(usize, usize)> {
    let bin_hz = sample_rate as f64 / fft_size as f64;
    let mut bands = Vec::with_capacity(n_bands + 1);
    let mut edges = vec![0.0, fmin];
    for b in 1..=n_bands {
        edges.push(fmin * 2f64.powi(b as i32));
    }
    for w in edges.windows(2) {
        let lo = (w[0] / bin_hz).ceil() as usize;
        let hi = ((w[1] / bin_hz).ceil() as usize).min(num_bins);
        bands.push((lo.min(num_bins), hi));
    }
    bands
}

/// Per-band log difference between spectral peaks and valleys, averaged over
/// frames. `quantile` selects how much of each band counts as peak/valley.
pub fn spectral_contrast(
    frames: &[SpectralFrame],
    n_bands: usize,
    quantile: f64,
) -> Result<Vec<f64>> {
    if frames.is_empty() {
        return Err(Error::EmptyInput("spectral_contrast needs >= 1 frame"));
    }
    let f0 = &frames[0];
    let bands = contrast_band_bins(f0.num_bins(), f0.fft_size, f0.sample_rate, 200.0, n_bands);
    let mut acc = vec![0.0; bands.len()];
    let mut scratch: Vec<f64> = Vec::new();
    for frame in frames {
        for (b, &(lo, hi)) in bands.iter().enumerate() {
            if hi <= lo {
                continue; // empty band above Nyquist: contributes 0
            }
            scratch.clear();
            scratch.extend_from_slice(&frame.magnitudes[lo..hi]);
            scratch.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let cnt = ((quantile * scratch.len() as f64).round() as usize).max(1);
            let valley: f64 = scratch[..cnt].iter().sum::<f64>() / cnt as f64;
            let peak: f64 = scratch[scratch.len() - cnt..].iter().sum::<f64>() / cnt as f64;
            acc[b] += peak.max(MAG_FLOOR).ln() - valley.max(MAG_FLOOR).ln();
        }
    }
    let n = frames.len() as f64;
    Ok(acc.into_iter().map(|v| v / n).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::stft::{stft, StftParams};
    use std::f64::consts::PI;

    fn tone(n: usize, freq: f64) -> Vec<f64> {
        (0..n).map(|i| (2.0 * PI * freq * i as f64 / 16000.0).sin()).collect()
    }

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = crate::rng::rng_for(seed, &[]);
        crate::augment::gaussian_noise(n, 0.1, &mut rng)
    }

    #[test]
    fn rms_and_zcr_basics() {
        assert_eq!(rms(&[0.5; 100]), 0.5);
        assert_eq!(zero_crossing_rate(&[0.5; 100]), 0.0);
        let alternating: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert_eq!(rms(&alternating), 1.0);
        assert_eq!(zero_crossing_rate(&alternating), 1.0);
    }

    #[test]
    fn sine_rms_closed_form() {
        let samples = tone(16000, 100.0); // whole periods
        assert!((rms(&samples) - 0.5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn zeros_count_as_positive() {
        assert_eq!(zero_crossing_rate(&[0.0, -1.0, 0.0, 1.0]), 2.0 / 3.0);
    }

    #[test]
    fn tone_centroid_and_bandwidth() {
        let frames = stft(&tone(3200, 1000.0), 16000, StftParams::default()).unwrap();
        let s = spectral_scalars(&frames).unwrap();
        let bin = 16000.0 / 512.0;
        assert!((s.centroid_hz - 1000.0).abs() <= bin, "centroid {}", s.centroid_hz);
        assert!(s.bandwidth_hz <= 2.0 * bin, "bandwidth {}", s.bandwidth_hz);
        assert!((s.rolloff_hz - 1000.0).abs() <= bin, "rolloff {}", s.rolloff_hz);
        assert!(s.flatness <= 0.1, "tone flatness {}", s.flatness);
    }

    #[test]
    fn noise_is_flat_tone_is_not() {
        let frames = stft(&noise(3200, 1), 16000, StftParams::default()).unwrap();
        let s = spectral_scalars(&frames).unwrap();
        assert!(s.flatness >= 0.5, "noise flatness {}", s.flatness);
    }

    #[test]
    fn silence_conventions() {
        let frames = stft(&vec![0.0; 3200], 16000, StftParams::default()).unwrap();
        let s = spectral_scalars(&frames).unwrap();
        assert_eq!(s.centroid_hz, 0.0);
        assert_eq!(s.bandwidth_hz, 0.0);
        assert_eq!(s.rolloff_hz, 0.0);
        assert_eq!(s.flatness, 1.0);
    }

    #[test]
    fn contrast_tone_band_dominates() {
        let frames = stft(&tone(3200, 1000.0), 16000, StftParams::default()).unwrap();
        let c = spectral_contrast(&frames, 7, 0.02).unwrap();
        assert_eq!(c.len(), 8);
        // 1000 Hz falls in the 800..1600 band (index 3: below-200, 200-400,
        // 400-800, 800-1600, ...).
        let argmax = c
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert_eq!(argmax, 3, "contrast {c:?}");
    }

    #[test]
    fn contrast_white_noise_is_low() {
        let frames = stft(&noise(3200, 2), 16000, StftParams::default()).unwrap();
        let c = spectral_contrast(&frames, 7, 0.02).unwrap();
        // Bands within Nyquist stay well below a tone's contrast.
        for (b, &v) in c.iter().enumerate().take(7) {
            assert!(v < 8.0, "band {b}: contrast {v}");
        }
    }

    #[test]
    fn contrast_is_scale_invariant() {
        let samples = noise(3200, 3);
        let scaled: Vec<f64> = samples.iter().map(|&x| 12.5 * x).collect();
        let a = spectral_contrast(
            &stft(&samples, 16000, StftParams::default()).unwrap(),
            7,
            0.02,
        )
        .unwrap();
        let b = spectral_contrast(
            &stft(&scaled, 16000, StftParams::default()).unwrap(),
            7,
            0.02,
        )
        .unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}
