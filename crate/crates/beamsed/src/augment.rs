//! Calibrated additive white Gaussian noise and the dataset augmentation sweep.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::audio::AudioClip;
use crate::error::{Error, Result};
use crate::par::map_index;
use crate::rng::{domain, rng_for};

/// A target signal-to-noise ratio in decibels.
///
/// SNR is defined on mean powers: `10 * log10(P_signal / P_noise)` with
/// `P = mean(x^2)` over the whole clip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrSpec {
    pub snr_db: f64,
}

impl SnrSpec {
    pub fn new(snr_db: f64) -> SnrSpec {
        SnrSpec { snr_db }
    }

    /// Noise power that realizes this SNR against a signal of power `p_signal`.
    pub fn noise_power(&self, p_signal: f64) -> f64 {
        p_signal / 10f64.powf(self.snr_db / 10.0)
    }
}

/// The default augmentation sweep: -10 dB to 30 dB in 5 dB steps.
pub fn default_augment_snrs() -> Vec<SnrSpec> {
    snr_range(-10.0, 30.0, 5.0)
}

/// The default simulation sweep: -10 dB to 30 dB in 1 dB steps.
pub fn default_simulation_snrs() -> Vec<SnrSpec> {
    snr_range(-10.0, 30.0, 1.0)
}

/// Inclusive dB range with a positive step.
pub fn snr_range(start_db: f64, end_db: f64, step_db: f64) -> Vec<SnrSpec> {
    assert!(step_db > 0.0, "snr step must be positive");
    let mut out = Vec::new();
    let n = ((end_db - start_db) / step_db).round() as i64;
    for k in 0..=n.max(0) {
        let v = start_db + step_db * k as f64;
        if v <= end_db + 1e-9 {
            out.push(SnrSpec::new(v));
        }
    }
    out
}

/// Arithmetic mean of squared samples.
pub fn mean_power(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("mean_power of empty sequence"));
    }
    Ok(samples.iter().map(|&x| x * x).sum::<f64>() / samples.len() as f64)
}

/// Gaussian noise of the given variance, seeded.
pub(crate) fn gaussian_noise(n: usize, variance: f64, rng: &mut impl Rng) -> Vec<f64> {
    let sigma = variance.sqrt();
    (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            z * sigma
        })
        .collect()
}

/// Add white Gaussian noise calibrated to the target SNR.
///
/// The output is not clipped to [-1, 1]; downstream processing is all in
/// floating point and clipping would distort the noise statistics at low SNR.
/// Deterministic for a fixed seed.
pub fn add_awgn(clip: &AudioClip, snr: SnrSpec, seed: u64) -> Result<AudioClip> {
    let p_signal = mean_power(&clip.samples)?;
    if p_signal <= 0.0 {
        return Err(Error::SilentClip {
            source_id: clip.source_id.clone(),
        });
    }
    let mut rng = rng_for(seed, &[]);
    let noise = gaussian_noise(clip.len(), snr.noise_power(p_signal), &mut rng);
    let samples = clip
        .samples
        .iter()
        .zip(&noise)
        .map(|(&x, &n)| x + n)
        .collect();
    Ok(AudioClip {
        samples,
        sample_rate: clip.sample_rate,
        label: clip.label,
        source_id: format!("{}#snr{:+}", clip.source_id, snr.snr_db),
    })
}

/// Originals plus one noisy copy per (clip, snr); labels preserved.
///
/// Noise seeds derive from (master seed, clip index, snr index), so the output
/// is reproducible and independent of evaluation order.
pub fn augment_dataset(
    dataset: &[AudioClip],
    snrs: &[SnrSpec],
    seed: u64,
) -> Result<Vec<AudioClip>> {
    let jobs: Vec<(usize, usize)> = (0..dataset.len())
        .flat_map(|c| (0..snrs.len()).map(move |s| (c, s)))
        .collect();
    let noisy = map_index(jobs.len(), |j| {
        let (c, s) = jobs[j];
        add_awgn(
            &dataset[c],
            snrs[s],
            crate::rng::derive_seed(seed, &[domain::AUGMENT, c as u64, s as u64]),
        )
    });

    let mut out = Vec::with_capacity(dataset.len() * (1 + snrs.len()));
    out.extend(dataset.iter().cloned());
    for clip in noisy {
        out.push(clip?);
    }
    Ok(out)
}

/// Measured SNR in dB of a (clean, noisy) pair.
pub fn measured_snr_db(clean: &[f64], noisy: &[f64]) -> Result<f64> {
    if clean.len() != noisy.len() {
        return Err(Error::ChannelLengthMismatch(vec![clean.len(), noisy.len()]));
    }
    let p_signal = mean_power(clean)?;
    let residual: Vec<f64> = clean.iter().zip(noisy).map(|(&c, &n)| n - c).collect();
    let p_noise = mean_power(&residual)?;
    if p_noise <= 0.0 {
        return Err(Error::config("noise power is zero; SNR is infinite"));
    }
    Ok(10.0 * (p_signal / p_noise).log10())
}
