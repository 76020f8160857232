//! Magnitude STFT shared by all spectral features.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StftParams {
    pub fft_size: usize,
    pub hop: usize,
}

impl Default for StftParams {
    fn default() -> Self {
        StftParams {
            fft_size: 512,
            hop: 160,
        }
    }
}

/// Magnitude spectrum of one analysis frame.
#[derive(Debug, Clone)]
pub struct SpectralFrame {
    /// `fft_size / 2 + 1` non-negative magnitudes.
    pub magnitudes: Vec<f64>,
    pub fft_size: usize,
    pub hop: usize,
    pub sample_rate: u32,
}

impl SpectralFrame {
    pub fn num_bins(&self) -> usize {
        self.magnitudes.len()
    }

    /// Center frequency of bin `k` in Hz.
    pub fn bin_hz(&self, k: usize) -> f64 {
        k as f64 * self.sample_rate as f64 / self.fft_size as f64
    }
}

/// Periodic Hann window.
pub(crate) fn hann(i: usize, n: usize) -> f64 {
    0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
}

pub(crate) fn plan_fft(fft_size: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::<f64>::new().plan_fft_forward(fft_size)
}

/// Magnitude STFT, uncentered: frames start at multiples of `hop` and lie
/// fully inside the window. Input shorter than one frame is analyzed as a
/// single zero-padded frame.
pub fn stft(samples: &[f64], sample_rate: u32, params: StftParams) -> Result<Vec<SpectralFrame>> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("stft of empty window"));
    }
    let fft = plan_fft(params.fft_size);
    stft_with(samples, sample_rate, params, fft.as_ref())
}

pub(crate) fn stft_with(
    samples: &[f64],
    sample_rate: u32,
    params: StftParams,
    fft: &dyn Fft<f64>,
) -> Result<Vec<SpectralFrame>> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("stft of empty window"));
    }
    let n = params.fft_size;
    let n_frames = if samples.len() < n {
        1
    } else {
        1 + (samples.len() - n) / params.hop
    };
    let mut frames = Vec::with_capacity(n_frames);
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    for frame in 0..n_frames {
        let start = frame * params.hop;
        for (i, slot) in buf.iter_mut().enumerate() {
            let x = samples.get(start + i).copied().unwrap_or(0.0);
            *slot = Complex::new(x * hann(i, n), 0.0);
        }
        fft.process(&mut buf);
        let magnitudes: Vec<f64> = buf[..n / 2 + 1].iter().map(|c| c.norm()).collect();
        frames.push(SpectralFrame {
            magnitudes,
            fft_size: n,
            hop: params.hop,
            sample_rate,
        });
    }
    Ok(frames)
}
