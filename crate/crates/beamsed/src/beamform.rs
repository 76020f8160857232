//! The three evaluation signals recovered from a 4-channel capture: plain sum,
//! Delay-and-Sum, and the GSC (fixed DaS path minus an LMS-adapted estimate of
//! the noise taken from blocking-matrix references).

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::arraysim::{apply_fractional_delay, DelayMode, MultichannelRecording, NUM_MICS};
use crate::audio::AudioClip;
use crate::error::{Error, Result};

/// 3x4 blocking matrix; every row sums to zero so a common (aligned) signal
/// is cancelled, leaving noise-only references.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockingMatrix(pub [[f64; NUM_MICS]; 3]);

impl Default for BlockingMatrix {
    /// Pairwise-difference form: rows (1,-1,0,0), (0,1,-1,0), (0,0,1,-1).
    fn default() -> Self {
        BlockingMatrix([
            [1.0, -1.0, 0.0, 0.0],
            [0.0, 1.0, -1.0, 0.0],
            [0.0, 0.0, 1.0, -1.0],
        ])
    }
}

impl BlockingMatrix {
    pub fn validate(&self) -> Result<()> {
        for (j, row) in self.0.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if sum.abs() > 1e-12 {
                return Err(Error::config(format!(
                    "blocking matrix row {j} sums to {sum}, expected 0"
                )));
            }
        }
        if self.rank() != 3 {
            return Err(Error::config("blocking matrix must have rank 3"));
        }
        Ok(())
    }

    fn rank(&self) -> usize {
        // Gaussian elimination on a 3x4 copy.
        let mut m = self.0;
        let mut rank = 0;
        let mut col = 0;
        while rank < 3 && col < NUM_MICS {
            let pivot = (rank..3).max_by(|&a, &b| {
                m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap()
            });
            let pivot = pivot.unwrap();
            if m[pivot][col].abs() < 1e-12 {
                col += 1;
                continue;
            }
            m.swap(rank, pivot);
            for r in (rank + 1)..3 {
                let f = m[r][col] / m[rank][col];
                for c in col..NUM_MICS {
                    m[r][c] -= f * m[rank][c];
                }
            }
            rank += 1;
            col += 1;
        }
        rank
    }
}

/// Adaptive-section settings. `mu = 0` disables adaptation (the GSC then
/// reduces to DaS), which the tests rely on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmsConfig {
    /// FIR length per blocked reference.
    pub taps: usize,
    /// Step size.
    pub mu: f64,
    /// Normalize the update by the instantaneous input power (NLMS).
    pub normalized: bool,
    /// NLMS regularizer.
    pub eps: f64,
}

impl Default for LmsConfig {
    fn default() -> Self {
        LmsConfig {
            taps: 16,
            mu: 0.01,
            normalized: true,
            eps: 1e-8,
        }
    }
}

impl LmsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.taps == 0 {
            return Err(Error::config("LMS taps must be >= 1"));
        }
        if self.mu < 0.0 {
            return Err(Error::config("LMS step size must be >= 0"));
        }
        if self.eps <= 0.0 {
            return Err(Error::config("NLMS regularizer must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TdoaMethod {
    /// Time-domain cross-correlation.
    PlainXcorr,
    /// Cross-spectrum whitened to unit magnitude before the inverse transform.
    GccPhat,
}

/// Estimated per-channel lags relative to the reference channel (entry 0 of
/// the recording's channel order is the reference by construction).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TdoaEstimate {
    pub lags_samples: [f64; NUM_MICS],
    pub method: TdoaMethod,
    /// Peak value of the normalized correlation, averaged over channels.
    pub confidence: f64,
}

impl TdoaEstimate {
    /// Ground-truth lags from a simulated recording.
    pub fn oracle(recording: &MultichannelRecording) -> TdoaEstimate {
        TdoaEstimate {
            lags_samples: recording.true_delays_samples,
            method: TdoaMethod::PlainXcorr,
            confidence: 1.0,
        }
    }

    pub fn zero() -> TdoaEstimate {
        TdoaEstimate {
            lags_samples: [0.0; NUM_MICS],
            method: TdoaMethod::PlainXcorr,
            confidence: 1.0,
        }
    }
}

fn energy(x: &[f64]) -> f64 {
    x.iter().map(|&v| v * v).sum()
}

/// Time-domain cross-correlation of `ch` against `reference` over
/// lags in [-max_lag, max_lag]. `corr[max_lag + l]` holds lag `l`.
fn xcorr(reference: &[f64], ch: &[f64], max_lag: i64) -> Vec<f64> {
    let n = reference.len() as i64;
    let mut out = Vec::with_capacity((2 * max_lag + 1) as usize);
    for lag in -max_lag..=max_lag {
        let mut acc = 0.0;
        let t0 = lag.max(0);
        let t1 = (n + lag).min(n);
        for t in t0..t1 {
            acc += ch[t as usize] * reference[(t - lag) as usize];
        }
        out.push(acc);
    }
    out
}

/// GCC-PHAT correlation over lags in [-max_lag, max_lag], same layout as
/// [`xcorr`].
fn gcc_phat(reference: &[f64], ch: &[f64], max_lag: i64) -> Vec<f64> {
    let n = reference.len();
    let nfft = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(nfft);
    let ifft = planner.plan_fft_inverse(nfft);

    let mut a: Vec<Complex<f64>> = reference
        .iter()
        .map(|&x| Complex::new(x, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(nfft)
        .collect();
    let mut b: Vec<Complex<f64>> = ch
        .iter()
        .map(|&x| Complex::new(x, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(nfft)
        .collect();
    fft.process(&mut a);
    fft.process(&mut b);

    let mut g: Vec<Complex<f64>> = a
        .iter()
        .zip(&b)
        .map(|(&ra, &rb)| {
            let cross = ra.conj() * rb;
            let mag = cross.norm().max(1e-30);
            cross / mag
        })
        .collect();
    ifft.process(&mut g);

    let scale = 1.0 / nfft as f64;
    (-max_lag..=max_lag)
        .map(|lag| {
            let idx = if lag >= 0 {
                lag as usize
            } else {
                (nfft as i64 + lag) as usize
            };
            g[idx].re * scale
        })
        .collect()
}

fn parabolic_offset(left: f64, center: f64, right: f64) -> f64 {
    let denom = left - 2.0 * center + right;
    if denom.abs() < 1e-30 {
        0.0
    } else {
        ((left - right) / (2.0 * denom)).clamp(-0.5, 0.5)
    }
}

/// Estimate per-channel lags against channel 0 by correlation peak picking.
///
/// `refine` adds 3-point parabolic interpolation around the integer peak for
/// sub-sample resolution.
pub fn estimate_tdoa(
    recording: &MultichannelRecording,
    method: TdoaMethod,
    max_lag: usize,
    refine: bool,
) -> Result<TdoaEstimate> {
    recording.validate()?;
    let n = recording.len();
    if n == 0 {
        return Err(Error::EmptyInput("estimate_tdoa on empty channels"));
    }
    if max_lag == 0 || max_lag >= n {
        return Err(Error::config(format!(
            "max_lag {max_lag} out of range for {n} samples"
        )));
    }
    let reference = &recording.channels[0];
    let e_ref = energy(reference);
    if e_ref == 0.0 {
        return Err(Error::SilentClip {
            source_id: format!("{} (reference channel)", recording.source_id),
        });
    }

    let mut lags = [0.0; NUM_MICS];
    let mut confidence = 0.0;
    let m = max_lag as i64;
    for i in 1..NUM_MICS {
        let ch = &recording.channels[i];
        let e_ch = energy(ch);
        if e_ch == 0.0 {
            return Err(Error::SilentClip {
                source_id: format!("{} (channel {i})", recording.source_id),
            });
        }
        let corr = match method {
            TdoaMethod::PlainXcorr => xcorr(reference, ch, m),
            TdoaMethod::GccPhat => gcc_phat(reference, ch, m),
        };
        let peak = corr
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(idx, _)| idx)
            .unwrap();
        let mut lag = peak as f64 - max_lag as f64;
        if refine && peak > 0 && peak + 1 < corr.len() {
            lag += parabolic_offset(corr[peak - 1], corr[peak], corr[peak + 1]);
        }
        lags[i] = lag;
        confidence += match method {
            TdoaMethod::PlainXcorr => corr[peak] / (e_ref * e_ch).sqrt(),
            TdoaMethod::GccPhat => corr[peak],
        };
    }

    Ok(TdoaEstimate {
        lags_samples: lags,
        method,
        confidence: confidence / (NUM_MICS - 1) as f64,
    })
}

fn output_clip(recording: &MultichannelRecording, samples: Vec<f64>, tag: &str) -> AudioClip {
    AudioClip {
        samples,
        sample_rate: recording.sample_rate,
        label: recording.label,
        source_id: format!("{}#{tag}", recording.source_id),
    }
}

/// Align each channel by advancing it by its lag, then average.
///
/// Returns the aligned channels and their mean; shared by DaS and GSC so the
/// two agree bitwise on the fixed path.
fn align_and_average(
    recording: &MultichannelRecording,
    lags: &TdoaEstimate,
    mode: DelayMode,
) -> Result<([Vec<f64>; NUM_MICS], Vec<f64>)> {
    recording.validate()?;
    let mut aligned: [Vec<f64>; NUM_MICS] = Default::default();
    for i in 0..NUM_MICS {
        let lag = lags.lags_samples[i];
        if !lag.is_finite() {
            return Err(Error::config("non-finite TDOA lag"));
        }
        aligned[i] = apply_fractional_delay(&recording.channels[i], -lag, mode)?;
    }
    let n = recording.len();
    let mut mean = Vec::with_capacity(n);
    for t in 0..n {
        mean.push((aligned[0][t] + aligned[1][t] + aligned[2][t] + aligned[3][t]) * 0.25);
    }
    Ok((aligned, mean))
}

/// Sample-wise average of the four channels, no temporal alignment.
///
/// The 1/4 scaling makes the output level match a single microphone; it does
/// not change any SNR ratio.
pub fn sum_no_beamforming(recording: &MultichannelRecording) -> Result<AudioClip> {
    let (_, mean) = align_and_average(recording, &TdoaEstimate::zero(), DelayMode::Nearest)?;
    Ok(output_clip(recording, mean, "sum"))
}

/// Delay-and-Sum: advance each channel by its lag, then average.
///
/// With ground-truth lags and independent unit-power noise per channel the
/// noise power drops by 1/4 while the signal is preserved, an array gain of
/// 10*log10(4) ~ 6.02 dB.
pub fn delay_and_sum(
    recording: &MultichannelRecording,
    lags: &TdoaEstimate,
    mode: DelayMode,
) -> Result<AudioClip> {
    let (_, mean) = align_and_average(recording, lags, mode)?;
    Ok(output_clip(recording, mean, "das"))
}

/// Project aligned channels through the blocking matrix.
pub fn block_signals(
    aligned: &[Vec<f64>; NUM_MICS],
    blocking: &BlockingMatrix,
) -> Result<[Vec<f64>; 3]> {
    let n = aligned[0].len();
    if aligned.iter().any(|c| c.len() != n) {
        return Err(Error::ChannelLengthMismatch(
            aligned.iter().map(|c| c.len()).collect(),
        ));
    }
    let mut out: [Vec<f64>; 3] = Default::default();
    for (j, row) in blocking.0.iter().enumerate() {
        let mut ref_j = Vec::with_capacity(n);
        for t in 0..n {
            let mut acc = 0.0;
            for (i, &w) in row.iter().enumerate() {
                acc += w * aligned[i][t];
            }
            ref_j.push(acc);
        }
        out[j] = ref_j;
    }
    Ok(out)
}

/// Generalized Sidelobe Canceller.
///
/// Upper path: the DaS output `d`. Lower path: the three blocked references,
/// jointly filtered by one adaptive FIR (`3 * taps` weights, zeros initially).
/// Output `y[t] = d[t] - w . u(t)`; the weights follow (N)LMS with `y` as the
/// error signal, one update per sample over a single pass.
pub fn gsc(
    recording: &MultichannelRecording,
    lags: &TdoaEstimate,
    blocking: &BlockingMatrix,
    cfg: &LmsConfig,
    mode: DelayMode,
) -> Result<AudioClip> {
    cfg.validate()?;
    blocking.validate()?;
    let (aligned, das) = align_and_average(recording, lags, mode)?;
    let refs = block_signals(&aligned, blocking)?;

    let taps = cfg.taps;
    let n = das.len();
    let mut weights = vec![0.0f64; 3 * taps];
    let mut input = vec![0.0f64; 3 * taps];
    let mut y = Vec::with_capacity(n);

    for t in 0..n {
        // u(t): for each reference j, taps b_j[t], b_j[t-1], ...
        for (j, r) in refs.iter().enumerate() {
            for k in 0..taps {
                input[j * taps + k] = if t >= k { r[t - k] } else { 0.0 };
            }
        }
        let mut est = 0.0;
        for (w, u) in weights.iter().zip(&input) {
            est += w * u;
        }
        let out = das[t] - est;
        if !out.is_finite() {
            return Err(Error::LmsDivergence { sample: t });
        }
        y.push(out);

        if cfg.mu > 0.0 {
            let gain = if cfg.normalized {
                let power: f64 = input.iter().map(|&u| u * u).sum();
                cfg.mu * out / (cfg.eps + power)
            } else {
                cfg.mu * out
            };
            for (w, u) in weights.iter_mut().zip(&input) {
                *w += gain * u;
            }
        }
    }

    Ok(output_clip(recording, y, "gsc"))
}
