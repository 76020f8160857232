//! Mel filterbanks, MFCCs, and their temporal derivatives.

use super::spectral::MAG_FLOOR;
use super::stft::SpectralFrame;
use crate::error::{Error, Result};

/// Log floor applied to filterbank energies before taking the logarithm.
pub const LOG_FLOOR: f64 = 1e-10;

fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// Triangular mel filterbank over FFT bins (HTK mel scale, unit-peak
/// triangles). Rows are filters, stored sparsely as (first_bin, weights).
#[derive(Debug, Clone)]
pub struct MelFilterbank {
    filters: Vec<(usize, Vec<f64>)>,
}

impl MelFilterbank {
    pub fn new(n_filters: usize, fft_size: usize, sample_rate: u32, fmin: f64, fmax: f64) -> Self {
        let n_bins = fft_size / 2 + 1;
        let mel_lo = hz_to_mel(fmin);
        let mel_hi = hz_to_mel(fmax);
        let points: Vec<f64> = (0..n_filters + 2)
            .map(|i| mel_to_hz(mel_lo + (mel_hi - mel_lo) * i as f64 / (n_filters + 1) as f64))
            .collect();
        let bin_hz = sample_rate as f64 / fft_size as f64;

        let mut filters = Vec::with_capacity(n_filters);
        for m in 1..=n_filters {
            let (lo, mid, hi) = (points[m - 1], points[m], points[m + 1]);
            let mut first = None;
            let mut weights = Vec::new();
            for k in 0..n_bins {
                let f = k as f64 * bin_hz;
                let w = if f > lo && f < mid {
                    (f - lo) / (mid - lo)
                } else if f == mid {
                    1.0
                } else if f > mid && f < hi {
                    (hi - f) / (hi - mid)
                } else {
                    0.0
                };
                if w > 0.0 {
                    if first.is_none() {
                        first = Some(k);
                    }
                    weights.push(w);
                } else if first.is_some() {
                    break;
                }
            }
            filters.push((first.unwrap_or(0), weights));
        }
        MelFilterbank { filters }
    }

    pub fn num_filters(&self) -> usize {
        self.filters.len()
    }

    /// Filterbank energies of one frame's power spectrum.
    pub fn apply(&self, frame: &SpectralFrame) -> Vec<f64> {
        self.filters
            .iter()
            .map(|(first, weights)| {
                weights
                    .iter()
                    .enumerate()
                    .map(|(i, &w)| {
                        let m = frame.magnitudes[first + i];
                        w * m * m
                    })
                    .sum()
            })
            .collect()
    }

    /// Log filterbank energies with the floor applied.
    pub fn apply_log(&self, frame: &SpectralFrame) -> Vec<f64> {
        self.apply(frame)
            .into_iter()
            .map(|e| e.max(LOG_FLOOR).ln())
            .collect()
    }
}

/// Orthonormal DCT-II of `values`, truncated to `n_out` coefficients.
pub fn dct2_orthonormal(values: &[f64], n_out: usize) -> Vec<f64> {
    let m = values.len();
    let mut out = Vec::with_capacity(n_out);
    for n in 0..n_out {
        let scale = if n == 0 {
            (1.0 / m as f64).sqrt()
        } else {
            (2.0 / m as f64).sqrt()
        };
        let sum: f64 = values
            .iter()
            .enumerate()
            .map(|(k, &v)| v * (std::f64::consts::PI * n as f64 * (k as f64 + 0.5) / m as f64).cos())
            .sum();
        out.push(scale * sum);
    }
    out
}

/// Per-frame MFCC trajectory: log-mel energies through an orthonormal DCT-II.
pub fn mfcc_frames(
    frames: &[SpectralFrame],
    filterbank: &MelFilterbank,
    n_mfcc: usize,
) -> Result<Vec<Vec<f64>>> {
    if frames.is_empty() {
        return Err(Error::EmptyInput("mfcc needs >= 1 frame"));
    }
    Ok(frames
        .iter()
        .map(|f| dct2_orthonormal(&filterbank.apply_log(f), n_mfcc))
        .collect())
}

/// Mean over frames of each coefficient.
pub fn mean_over_frames(trajectory: &[Vec<f64>]) -> Vec<f64> {
    let dims = trajectory[0].len();
    let mut out = vec![0.0; dims];
    for frame in trajectory {
        for (o, &v) in out.iter_mut().zip(frame) {
            *o += v;
        }
    }
    let n = trajectory.len() as f64;
    out.iter_mut().for_each(|v| *v /= n);
    out
}

/// First-order regression delta with half-width 2 and edge replication:
/// `d[t] = sum_{n=1..2} n * (c[t+n] - c[t-n]) / (2 * (1 + 4))`.
pub fn delta_trajectory(trajectory: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let t_len = trajectory.len();
    let dims = trajectory[0].len();
    let clamp = |t: i64| -> &Vec<f64> {
        let idx = t.clamp(0, t_len as i64 - 1) as usize;
        &trajectory[idx]
    };
    let denom = 10.0; // 2 * (1^2 + 2^2)
    (0..t_len as i64)
        .map(|t| {
            (0..dims)
                .map(|d| {
                    let mut acc = 0.0;
                    for n in 1..=2i64 {
                        acc += n as f64 * (clamp(t + n)[d] - clamp(t - n)[d]);
                    }
                    acc / denom
                })
                .collect()
        })
        .collect()
}

/// Window-level delta and delta-delta features from a per-frame MFCC
/// trajectory: each is the mean over frames of the regression derivative.
pub fn deltas(trajectory: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
    if trajectory.is_empty() {
        return Err(Error::EmptyInput("deltas need >= 1 frame"));
    }
    let d1 = delta_trajectory(trajectory);
    let d2 = delta_trajectory(&d1);
    Ok((mean_over_frames(&d1), mean_over_frames(&d2)))
}

/// Log mel-band energies (10-band layout by default), averaged over frames.
pub fn log_mel_bands(frames: &[SpectralFrame], filterbank: &MelFilterbank) -> Result<Vec<f64>> {
    if frames.is_empty() {
        return Err(Error::EmptyInput("mel bands need >= 1 frame"));
    }
    let per_frame: Vec<Vec<f64>> = frames.iter().map(|f| filterbank.apply_log(f)).collect();
    Ok(mean_over_frames(&per_frame))
}

/// Keep magnitudes away from exact zero so tonal test signals exercise the
/// log-linearity paths; re-exported for tests.
pub fn floor_mag(m: f64) -> f64 {
    m.max(MAG_FLOOR)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::stft::{stft, StftParams};
    use std::f64::consts::PI;

    fn frames_of(samples: &[f64]) -> Vec<SpectralFrame> {
        stft(samples, 16000, StftParams::default()).unwrap()
    }

    fn tone_plus_floor(n: usize, freq: f64, gain: f64) -> Vec<f64> {
        // A tone over a small broadband floor keeps every mel band above the
        // log floor, which the exact log-linearity checks rely on.
        let mut rng = crate::rng::rng_for(1234, &[]);
        let noise = crate::augment::gaussian_noise(n, 1e-6, &mut rng);
        (0..n)
            .map(|i| gain * ((2.0 * PI * freq * i as f64 / 16000.0).sin() + noise[i]))
            .collect()
    }

    #[test]
    fn silence_mfcc_is_dct_of_log_floor() {
        let fb = MelFilterbank::new(40, 512, 16000, 0.0, 8000.0);
        let frames = frames_of(&vec![0.0; 3200]);
        let traj = mfcc_frames(&frames, &fb, 19).unwrap();
        let mean = mean_over_frames(&traj);
        let expected_c0 = LOG_FLOOR.ln() * 40f64.sqrt();
        assert!((mean[0] - expected_c0).abs() < 1e-9, "c0 {}", mean[0]);
        for (i, &c) in mean.iter().enumerate().skip(1) {
            assert!(c.abs() < 1e-9, "c{i} = {c}");
        }
    }

    #[test]
    fn gain_shifts_only_c0() {
        let fb = MelFilterbank::new(40, 512, 16000, 0.0, 8000.0);
        let base = tone_plus_floor(3200, 1000.0, 0.3);
        let gained = tone_plus_floor(3200, 1000.0, 0.3 * 4.0);
        let a = mean_over_frames(&mfcc_frames(&frames_of(&base), &fb, 19).unwrap());
        let b = mean_over_frames(&mfcc_frames(&frames_of(&gained), &fb, 19).unwrap());
        // Power scales by g^2, so log-mel shifts by 2 ln g in every band and
        // only the DC coefficient of the DCT moves: by 2 ln(g) sqrt(40).
        let expected_shift = 2.0 * 4f64.ln() * 40f64.sqrt();
        assert!(
            (b[0] - a[0] - expected_shift).abs() < 1e-6,
            "c0 shift {} vs {}",
            b[0] - a[0],
            expected_shift
        );
        for i in 1..19 {
            assert!((a[i] - b[i]).abs() < 1e-6, "c{i}: {} vs {}", a[i], b[i]);
        }
    }

    #[test]
    fn different_tones_differ() {
        let fb = MelFilterbank::new(40, 512, 16000, 0.0, 8000.0);
        let a = mean_over_frames(
            &mfcc_frames(&frames_of(&tone_plus_floor(3200, 500.0, 0.5)), &fb, 19).unwrap(),
        );
        let b = mean_over_frames(
            &mfcc_frames(&frames_of(&tone_plus_floor(3200, 2500.0, 0.5)), &fb, 19).unwrap(),
        );
        let dist: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum();
        assert!(dist > 1.0, "MFCC vectors too close: {dist}");
    }

    #[test]
    fn constant_trajectory_has_zero_deltas() {
        let traj = vec![vec![1.0, -2.0, 3.0]; 10];
        let (d1, d2) = deltas(&traj).unwrap();
        assert!(d1.iter().all(|&v| v == 0.0));
        assert!(d2.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn linear_ramp_gives_constant_delta_zero_dd() {
        let traj: Vec<Vec<f64>> = (0..12).map(|t| vec![0.5 * t as f64]).collect();
        let d1 = delta_trajectory(&traj);
        let d2 = delta_trajectory(&d1);
        // Interior frames (away from the replicated edges).
        for t in 2..10 {
            assert!((d1[t][0] - 0.5).abs() < 1e-12, "d1[{t}] = {}", d1[t][0]);
        }
        for t in 4..8 {
            assert!(d2[t][0].abs() < 1e-12, "d2[{t}] = {}", d2[t][0]);
        }
    }

    #[test]
    fn delta_matches_direct_formula_oracle() {
        let mut rng = crate::rng::rng_for(9, &[]);
        let traj: Vec<Vec<f64>> = (0..15)
            .map(|_| crate::augment::gaussian_noise(20, 1.0, &mut rng))
            .collect();
        let d1 = delta_trajectory(&traj);
        let at = |t: i64, d: usize| traj[t.clamp(0, 14) as usize][d];
        for t in 0..15i64 {
            for d in 0..20 {
                let expected =
                    ((at(t + 1, d) - at(t - 1, d)) + 2.0 * (at(t + 2, d) - at(t - 2, d))) / 10.0;
                assert!(
                    (d1[t as usize][d] - expected).abs() < 1e-9,
                    "t={t} d={d}"
                );
            }
        }
    }

    #[test]
    fn mel_bands_silence_and_tone_placement() {
        let fb = MelFilterbank::new(10, 512, 16000, 0.0, 8000.0);
        let silent = log_mel_bands(&frames_of(&vec![0.0; 3200]), &fb).unwrap();
        assert_eq!(silent.len(), 10);
        for &v in &silent {
            assert!((v - LOG_FLOOR.ln()).abs() < 1e-12);
        }

        let low = log_mel_bands(&frames_of(&tone_plus_floor(3200, 300.0, 0.5)), &fb).unwrap();
        let high = log_mel_bands(&frames_of(&tone_plus_floor(3200, 5000.0, 0.5)), &fb).unwrap();
        let argmax = |v: &[f64]| {
            v.iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0
        };
        assert!(argmax(&high) > argmax(&low));
    }

    #[test]
    fn doubling_energy_adds_log2_per_band() {
        let fb = MelFilterbank::new(10, 512, 16000, 0.0, 8000.0);
        let base = tone_plus_floor(3200, 700.0, 0.4);
        let doubled: Vec<f64> = base.iter().map(|&x| x * 2f64.sqrt()).collect();
        let a = log_mel_bands(&frames_of(&base), &fb).unwrap();
        let b = log_mel_bands(&frames_of(&doubled), &fb).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((y - x - 2f64.ln()).abs() < 1e-9, "{x} -> {y}");
        }
    }

    #[test]
    fn dct_orthonormal_of_constant_vector() {
        let c = dct2_orthonormal(&vec![3.0; 16], 16);
        assert!((c[0] - 3.0 * 4.0).abs() < 1e-12); // 3 * sqrt(16)
        for &v in &c[1..] {
            assert!(v.abs() < 1e-12);
        }
    }
}
