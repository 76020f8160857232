//! Far-field simulation of a 4-microphone capture: per-mic plane-wave delays
//! from the array geometry plus independent white noise per channel.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::audio::{AudioClip, ClassLabel};
use crate::augment::{gaussian_noise, mean_power, SnrSpec};
use crate::error::{Error, Result};
use crate::rng::{domain, rng_for};

pub const NUM_MICS: usize = 4;

/// Microphone positions in meters and the delay reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    /// Four 3-D positions; the array plane is z = 0 by convention.
    pub mic_positions: [[f64; 3]; NUM_MICS],
    /// Index of the microphone all delays are relative to.
    pub reference_index: usize,
    /// Speed of sound in m/s.
    pub speed_of_sound: f64,
}

impl Default for ArrayGeometry {
    /// Square of side 0.058 m centered at the origin in the z = 0 plane, an
    /// approximation of a compact 4-mic array; fully configurable.
    fn default() -> Self {
        let h = 0.058 / 2.0;
        ArrayGeometry {
            mic_positions: [
                [h, h, 0.0],
                [-h, h, 0.0],
                [-h, -h, 0.0],
                [h, -h, 0.0],
            ],
            reference_index: 0,
            speed_of_sound: 343.0,
        }
    }
}

impl ArrayGeometry {
    pub fn validate(&self) -> Result<()> {
        if self.reference_index >= NUM_MICS {
            return Err(Error::config("reference_index must be in 0..4"));
        }
        if self.speed_of_sound <= 0.0 {
            return Err(Error::config("speed_of_sound must be positive"));
        }
        for i in 0..NUM_MICS {
            for j in (i + 1)..NUM_MICS {
                let d: f64 = (0..3)
                    .map(|k| (self.mic_positions[i][k] - self.mic_positions[j][k]).powi(2))
                    .sum();
                if d == 0.0 {
                    return Err(Error::config(format!(
                        "microphones {i} and {j} share a position"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Largest pairwise mic distance in meters.
    pub fn diameter(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..NUM_MICS {
            for j in (i + 1)..NUM_MICS {
                let d: f64 = (0..3)
                    .map(|k| (self.mic_positions[i][k] - self.mic_positions[j][k]).powi(2))
                    .sum::<f64>()
                    .sqrt();
                max = max.max(d);
            }
        }
        max
    }

    /// Upper bound on |inter-mic delay| in samples for any arrival direction.
    pub fn max_delay_samples(&self, sample_rate: u32) -> f64 {
        self.diameter() / self.speed_of_sound * sample_rate as f64
    }
}

/// Arrival direction: azimuth in [0, 2pi), elevation in [0, pi/2].
/// Elevation pi/2 is directly overhead (broadside to a planar array).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionOfArrival {
    pub azimuth: f64,
    pub elevation: f64,
}

impl DirectionOfArrival {
    pub fn new(azimuth: f64, elevation: f64) -> Result<DirectionOfArrival> {
        if !(0.0..2.0 * PI).contains(&azimuth) {
            return Err(Error::config(format!("azimuth {azimuth} not in [0, 2pi)")));
        }
        if !(0.0..=PI / 2.0).contains(&elevation) {
            return Err(Error::config(format!(
                "elevation {elevation} not in [0, pi/2]"
            )));
        }
        Ok(DirectionOfArrival { azimuth, elevation })
    }

    /// Uniform draw over azimuth [0, 2pi) and elevation [0, pi/2].
    pub fn random(rng: &mut impl Rng) -> DirectionOfArrival {
        DirectionOfArrival {
            azimuth: rng.random::<f64>() * 2.0 * PI,
            elevation: rng.random::<f64>() * PI / 2.0,
        }
    }
}

/// Unit vector pointing from the array toward the source.
pub fn doa_unit_vector(doa: DirectionOfArrival) -> [f64; 3] {
    let (a, e) = (doa.azimuth, doa.elevation);
    [e.cos() * a.cos(), e.cos() * a.sin(), e.sin()]
}

/// Per-mic arrival delays in samples, relative to the reference microphone.
///
/// Far-field plane-wave model: `tau_i = -(p_i - p_ref) . u / c`, scaled to
/// samples. A mic farther along the propagation direction (-u) receives the
/// wavefront later, giving a positive delay.
pub fn mic_delays(
    geometry: &ArrayGeometry,
    doa: DirectionOfArrival,
    sample_rate: u32,
) -> [f64; NUM_MICS] {
    let u = doa_unit_vector(doa);
    let p_ref = geometry.mic_positions[geometry.reference_index];
    let mut delays = [0.0; NUM_MICS];
    for (i, p) in geometry.mic_positions.iter().enumerate() {
        let proj: f64 = (0..3).map(|k| (p[k] - p_ref[k]) * u[k]).sum();
        delays[i] = -proj / geometry.speed_of_sound * sample_rate as f64;
    }
    delays[geometry.reference_index] = 0.0;
    delays
}

/// How fractional delays are realized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DelayMode {
    /// Round to the nearest whole sample and shift.
    Nearest,
    /// Windowed-sinc interpolation (Hann window, `half_width` taps per side).
    Sinc { half_width: usize },
}

impl Default for DelayMode {
    fn default() -> Self {
        DelayMode::Sinc { half_width: 32 }
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Delay a signal by a possibly fractional number of samples (negative
/// advances it). Output length is preserved; edges fill with zeros.
pub fn apply_fractional_delay(signal: &[f64], delay: f64, mode: DelayMode) -> Result<Vec<f64>> {
    let n = signal.len();
    if delay.abs() >= n as f64 {
        return Err(Error::DelayTooLarge { delay, len: n });
    }
    match mode {
        DelayMode::Nearest => {
            let shift = delay.round() as i64;
            let mut out = vec![0.0; n];
            for (i, slot) in out.iter_mut().enumerate() {
                let src = i as i64 - shift;
                if (0..n as i64).contains(&src) {
                    *slot = signal[src as usize];
                }
            }
            Ok(out)
        }
        DelayMode::Sinc { half_width } => {
            let half = half_width.max(1) as i64;
            let base = delay.floor();
            let frac = delay - base;
            if frac == 0.0 {
                // Whole-sample delay: the kernel degenerates to a unit impulse.
                return apply_fractional_delay(signal, delay, DelayMode::Nearest);
            }
            // y[i] = sum_k x[i - base - k] * sinc(frac - ... ) over the tap window.
            let taps: Vec<(i64, f64)> = (-half + 1..=half)
                .map(|k| {
                    let t = k as f64 - frac;
                    let w = 0.5 * (1.0 + (PI * t / half as f64).cos());
                    (k, sinc(t) * w)
                })
                .collect();
            let mut out = vec![0.0; n];
            let base = base as i64;
            for (i, slot) in out.iter_mut().enumerate() {
                let mut acc = 0.0;
                for &(k, h) in &taps {
                    let src = i as i64 - base - k;
                    if (0..n as i64).contains(&src) {
                        acc += signal[src as usize] * h;
                    }
                }
                *slot = acc;
            }
            Ok(out)
        }
    }
}

/// A simulated 4-channel capture with its ground truth.
#[derive(Debug, Clone)]
pub struct MultichannelRecording {
    pub channels: [Vec<f64>; NUM_MICS],
    pub sample_rate: u32,
    pub true_doa: DirectionOfArrival,
    /// Delays actually applied per channel (rounded in `Nearest` mode),
    /// relative to the reference; the reference entry is exactly 0.
    pub true_delays_samples: [f64; NUM_MICS],
    pub snr_db: f64,
    pub label: Option<ClassLabel>,
    pub source_id: String,
}

impl MultichannelRecording {
    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels[0].is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.channels[0].len();
        if self.channels.iter().any(|c| c.len() != n) {
            return Err(Error::ChannelLengthMismatch(
                self.channels.iter().map(|c| c.len()).collect(),
            ));
        }
        Ok(())
    }
}

/// Simulate the capture of one clip: delay per mic, then per-channel white
/// noise calibrated so each channel's own SNR equals `snr`.
pub fn simulate_capture(
    clip: &AudioClip,
    geometry: &ArrayGeometry,
    doa: DirectionOfArrival,
    snr: SnrSpec,
    mode: DelayMode,
    seed: u64,
) -> Result<MultichannelRecording> {
    geometry.validate()?;
    let p_signal = mean_power(&clip.samples)?;
    if p_signal <= 0.0 {
        return Err(Error::SilentClip {
            source_id: clip.source_id.clone(),
        });
    }
    let ideal = mic_delays(geometry, doa, clip.sample_rate);
    let mut applied = [0.0; NUM_MICS];
    let noise_power = snr.noise_power(p_signal);

    let mut channels: [Vec<f64>; NUM_MICS] = Default::default();
    for i in 0..NUM_MICS {
        applied[i] = match mode {
            DelayMode::Nearest => ideal[i].round(),
            DelayMode::Sinc { .. } => ideal[i],
        };
        let mut ch = apply_fractional_delay(&clip.samples, ideal[i], mode)?;
        let mut rng = rng_for(seed, &[domain::SIM_NOISE, i as u64]);
        for (x, n) in ch.iter_mut().zip(gaussian_noise(clip.len(), noise_power, &mut rng)) {
            *x += n;
        }
        channels[i] = ch;
    }

    Ok(MultichannelRecording {
        channels,
        sample_rate: clip.sample_rate,
        true_doa: doa,
        true_delays_samples: applied,
        snr_db: snr.snr_db,
        label: clip.label,
        source_id: clip.source_id.clone(),
    })
}

/// A signal-free diffuse noise field built as a superposition of independent
/// white-noise plane waves from random directions.
///
/// Unlike the per-channel independent noise of [`simulate_capture`], the
/// waves arrive with direction-dependent inter-mic delays, so the channels
/// carry the spatial coherence a physical diffuse field has. This is the
/// input the adaptive canceller tests drive: its blocked references actually
/// correlate with the fixed-beamformer output. Total per-channel power is
/// approximately `1.0`.
pub fn plane_wave_noise_field(
    geometry: &ArrayGeometry,
    sample_rate: u32,
    len: usize,
    num_waves: usize,
    mode: DelayMode,
    seed: u64,
) -> Result<[Vec<f64>; NUM_MICS]> {
    geometry.validate()?;
    if len == 0 || num_waves == 0 {
        return Err(Error::EmptyInput("plane_wave_noise_field"));
    }
    let mut channels: [Vec<f64>; NUM_MICS] = [
        vec![0.0; len],
        vec![0.0; len],
        vec![0.0; len],
        vec![0.0; len],
    ];
    let wave_power = 1.0 / num_waves as f64;
    for w in 0..num_waves {
        let mut rng = rng_for(seed, &[domain::SIM_NOISE, 0xD1FF, w as u64]);
        let doa = DirectionOfArrival::random(&mut rng);
        let delays = mic_delays(geometry, doa, sample_rate);
        let wave = gaussian_noise(len, wave_power, &mut rng);
        for i in 0..NUM_MICS {
            let delayed = apply_fractional_delay(&wave, delays[i], mode)?;
            for (c, v) in channels[i].iter_mut().zip(&delayed) {
                *c += v;
            }
        }
    }
    Ok(channels)
}

/// Lazy sweep over (clip, snr) pairs.
///
/// The DOA for each clip is drawn once and reused across the SNR sweep unless
/// `redraw_doa` is set, in which case it is redrawn per (clip, snr). Noise is
/// independent per (clip, snr). Everything derives from `seed`, so any pair
/// can be regenerated in isolation via [`SweepPlan::simulate_pair`].
pub struct SweepPlan<'a> {
    pub dataset: &'a [AudioClip],
    pub geometry: ArrayGeometry,
    pub snrs: Vec<SnrSpec>,
    pub mode: DelayMode,
    pub redraw_doa: bool,
    pub seed: u64,
}

impl<'a> SweepPlan<'a> {
    pub fn new(
        dataset: &'a [AudioClip],
        geometry: ArrayGeometry,
        snrs: Vec<SnrSpec>,
        mode: DelayMode,
        redraw_doa: bool,
        seed: u64,
    ) -> SweepPlan<'a> {
        SweepPlan {
            dataset,
            geometry,
            snrs,
            mode,
            redraw_doa,
            seed,
        }
    }

    pub fn num_pairs(&self) -> usize {
        self.dataset.len() * self.snrs.len()
    }

    /// The DOA used for `clip_index` (at `snr_index`, when redrawing).
    pub fn doa_for(&self, clip_index: usize, snr_index: usize) -> DirectionOfArrival {
        let mut rng = if self.redraw_doa {
            rng_for(
                self.seed,
                &[domain::DOA, clip_index as u64, snr_index as u64],
            )
        } else {
            rng_for(self.seed, &[domain::DOA, clip_index as u64])
        };
        DirectionOfArrival::random(&mut rng)
    }

    /// Simulate one (clip, snr) cell.
    pub fn simulate_pair(&self, clip_index: usize, snr_index: usize) -> Result<MultichannelRecording> {
        let clip = &self.dataset[clip_index];
        let snr = self.snrs[snr_index];
        let doa = self.doa_for(clip_index, snr_index);
        let noise_seed = crate::rng::derive_seed(
            self.seed,
            &[domain::SIM_NOISE, clip_index as u64, snr_index as u64],
        );
        simulate_capture(clip, &self.geometry, doa, snr, self.mode, noise_seed)
    }
}

/// Stream every recording of the sweep in (clip, snr) order.
pub fn sweep_simulations<'a>(
    plan: &'a SweepPlan<'a>,
) -> impl Iterator<Item = Result<MultichannelRecording>> + 'a {
    let n_snrs = plan.snrs.len();
    (0..plan.num_pairs()).map(move |idx| plan.simulate_pair(idx / n_snrs, idx % n_snrs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tone_clip(n: usize) -> AudioClip {
        let samples = (0..n)
            .map(|i| (2.0 * PI * 440.0 * i as f64 / 16000.0).sin() * 0.5)
            .collect();
        AudioClip::new(samples, 16000, None, "tone").unwrap()
    }

    #[test]
    fn unit_vector_axes() {
        let assert_vec = |doa: DirectionOfArrival, expected: [f64; 3]| {
            let u = doa_unit_vector(doa);
            for k in 0..3 {
                assert!((u[k] - expected[k]).abs() < 1e-12, "{u:?} vs {expected:?}");
            }
        };
        assert_vec(DirectionOfArrival::new(0.0, 0.0).unwrap(), [1.0, 0.0, 0.0]);
        assert_vec(
            DirectionOfArrival::new(PI / 2.0, 0.0).unwrap(),
            [0.0, 1.0, 0.0],
        );
        for a in [0.0, 1.0, 4.0] {
            assert_vec(DirectionOfArrival::new(a, PI / 2.0).unwrap(), [0.0, 0.0, 1.0]);
        }
        let u = doa_unit_vector(DirectionOfArrival::new(1.2, 0.7).unwrap());
        let norm: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overhead_source_gives_zero_delays() {
        let g = ArrayGeometry::default();
        let delays = mic_delays(&g, DirectionOfArrival::new(1.0, PI / 2.0).unwrap(), 16000);
        for d in delays {
            assert!(d.abs() < 1e-9, "{delays:?}");
        }
    }

    #[test]
    fn endfire_delay_matches_plane_wave_formula() {
        let mut g = ArrayGeometry::default();
        g.mic_positions = [
            [0.0, 0.0, 0.0],
            [0.06, 0.0, 0.0],
            [0.0, 0.06, 0.0],
            [0.0, 0.0, 0.06],
        ];
        let delays = mic_delays(&g, DirectionOfArrival::new(0.0, 0.0).unwrap(), 16000);
        assert_eq!(delays[0], 0.0);
        let expected = -0.06 / 343.0 * 16000.0; // -2.799 samples
        assert!((delays[1] - expected).abs() < 1e-9, "{}", delays[1]);
        assert!((delays[1] + 2.799).abs() < 1e-3);
        assert!(delays[2].abs() < 1e-12);
    }

    #[test]
    fn delays_scale_linearly_with_positions() {
        let g = ArrayGeometry::default();
        let mut doubled = g.clone();
        for p in doubled.mic_positions.iter_mut() {
            for v in p.iter_mut() {
                *v *= 2.0;
            }
        }
        let doa = DirectionOfArrival::new(0.9, 0.3).unwrap();
        let d1 = mic_delays(&g, doa, 16000);
        let d2 = mic_delays(&doubled, doa, 16000);
        for i in 0..NUM_MICS {
            assert!((d2[i] - 2.0 * d1[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn delays_antisymmetric_under_direction_flip() {
        let g = ArrayGeometry::default();
        // u(-a) at elevation 0 flips the in-plane direction.
        let d_fwd = mic_delays(&g, DirectionOfArrival::new(0.7, 0.0).unwrap(), 16000);
        let d_rev = mic_delays(&g, DirectionOfArrival::new(0.7 + PI, 0.0).unwrap(), 16000);
        for i in 0..NUM_MICS {
            assert!((d_fwd[i] + d_rev[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn pairwise_delay_bounded_by_aperture() {
        let g = ArrayGeometry::default();
        let bound = g.max_delay_samples(16000);
        for seed in 0..50u64 {
            let mut rng = rng_for(seed, &[]);
            let doa = DirectionOfArrival::random(&mut rng);
            let delays = mic_delays(&g, doa, 16000);
            for i in 0..NUM_MICS {
                for j in 0..NUM_MICS {
                    assert!((delays[i] - delays[j]).abs() <= bound + 1e-9);
                }
            }
        }
    }

    #[test]
    fn zero_delay_is_identity_in_both_modes() {
        let signal: Vec<f64> = (0..256).map(|i| ((i * 7) % 13) as f64 - 6.0).collect();
        for mode in [DelayMode::Nearest, DelayMode::default()] {
            let out = apply_fractional_delay(&signal, 0.0, mode).unwrap();
            assert_eq!(out, signal, "{mode:?}");
        }
    }

    #[test]
    fn integer_delay_shifts_exactly() {
        let signal: Vec<f64> = (0..64).map(|i| i as f64).collect();
        for mode in [DelayMode::Nearest, DelayMode::default()] {
            let out = apply_fractional_delay(&signal, 5.0, mode).unwrap();
            assert_eq!(&out[..5], &[0.0; 5], "{mode:?}");
            assert_eq!(&out[5..], &signal[..59], "{mode:?}");
        }
    }

    #[test]
    fn half_sample_delay_matches_resampled_sine() {
        let n = 4096;
        let f = 440.0 / 16000.0;
        let signal: Vec<f64> = (0..n).map(|i| (2.0 * PI * f * i as f64).sin()).collect();
        let delayed = apply_fractional_delay(&signal, 0.5, DelayMode::default()).unwrap();
        let exact: Vec<f64> = (0..n)
            .map(|i| (2.0 * PI * f * (i as f64 - 0.5)).sin())
            .collect();
        // Normalized correlation away from the edges.
        let margin = 64;
        let (mut dot, mut pa, mut pb) = (0.0, 0.0, 0.0);
        for i in margin..n - margin {
            dot += delayed[i] * exact[i];
            pa += delayed[i] * delayed[i];
            pb += exact[i] * exact[i];
        }
        let corr = dot / (pa * pb).sqrt();
        assert!(corr >= 0.999, "correlation {corr}");
    }

    #[test]
    fn excessive_delay_is_an_error() {
        let signal = vec![1.0; 8];
        assert!(matches!(
            apply_fractional_delay(&signal, 8.0, DelayMode::Nearest),
            Err(Error::DelayTooLarge { .. })
        ));
    }

    #[test]
    fn capture_at_high_snr_recovers_shifted_signal() {
        let clip = tone_clip(16000);
        let g = ArrayGeometry::default();
        let doa = DirectionOfArrival::new(0.3, 0.2).unwrap();
        let rec =
            simulate_capture(&clip, &g, doa, SnrSpec::new(120.0), DelayMode::Nearest, 5).unwrap();
        for i in 0..NUM_MICS {
            let shifted =
                apply_fractional_delay(&clip.samples, rec.true_delays_samples[i], DelayMode::Nearest)
                    .unwrap();
            let err: f64 = rec.channels[i]
                .iter()
                .zip(&shifted)
                .map(|(&a, &b)| (a - b).powi(2))
                .sum::<f64>()
                / clip.len() as f64;
            assert!(err.sqrt() < 1e-5, "channel {i}: rms err {}", err.sqrt());
        }
    }

    #[test]
    fn overhead_capture_channels_differ_only_by_noise() {
        let clip = tone_clip(8000);
        let g = ArrayGeometry::default();
        let doa = DirectionOfArrival::new(0.0, PI / 2.0).unwrap();
        let rec = simulate_capture(&clip, &g, doa, SnrSpec::new(20.0), DelayMode::default(), 9)
            .unwrap();
        for d in rec.true_delays_samples {
            assert!(d.abs() < 1e-9);
        }
        // Noise residuals of two channels are (nearly) uncorrelated.
        let r0: Vec<f64> = rec.channels[0]
            .iter()
            .zip(&clip.samples)
            .map(|(&a, &b)| a - b)
            .collect();
        let r1: Vec<f64> = rec.channels[1]
            .iter()
            .zip(&clip.samples)
            .map(|(&a, &b)| a - b)
            .collect();
        let p0 = mean_power(&r0).unwrap();
        let p1 = mean_power(&r1).unwrap();
        let xcorr: f64 = r0.iter().zip(&r1).map(|(&a, &b)| a * b).sum::<f64>()
            / (clip.len() as f64 * (p0 * p1).sqrt());
        assert!(xcorr.abs() <= 5.0 / (clip.len() as f64).sqrt(), "xcorr {xcorr}");
    }

    #[test]
    fn capture_is_deterministic() {
        let clip = tone_clip(4000);
        let g = ArrayGeometry::default();
        let doa = DirectionOfArrival::new(1.0, 0.5).unwrap();
        let a = simulate_capture(&clip, &g, doa, SnrSpec::new(10.0), DelayMode::default(), 3)
            .unwrap();
        let b = simulate_capture(&clip, &g, doa, SnrSpec::new(10.0), DelayMode::default(), 3)
            .unwrap();
        for i in 0..NUM_MICS {
            assert_eq!(a.channels[i], b.channels[i]);
        }
    }

    #[test]
    fn per_channel_snr_calibration() {
        let clip = tone_clip(16000);
        let g = ArrayGeometry::default();
        let doa = DirectionOfArrival::new(0.0, PI / 2.0).unwrap(); // zero delays
        let rec =
            simulate_capture(&clip, &g, doa, SnrSpec::new(5.0), DelayMode::Nearest, 21).unwrap();
        for i in 0..NUM_MICS {
            let measured =
                crate::augment::measured_snr_db(&clip.samples, &rec.channels[i]).unwrap();
            assert!(
                (measured - 5.0).abs() < 0.15,
                "channel {i}: measured {measured} dB"
            );
        }
    }

    #[test]
    fn sweep_counts_and_doa_policy() {
        let clips = vec![tone_clip(4000), tone_clip(4000)];
        let snrs = crate::augment::default_simulation_snrs();
        let plan = SweepPlan::new(
            &clips,
            ArrayGeometry::default(),
            snrs,
            DelayMode::Nearest,
            false,
            77,
        );
        assert_eq!(plan.num_pairs(), 82);
        assert_eq!(sweep_simulations(&plan).count(), 82);

        // Fixed per clip across the sweep.
        let d0 = plan.doa_for(0, 0);
        let d1 = plan.doa_for(0, 40);
        assert_eq!(d0, d1);

        let redraw = SweepPlan::new(
            &clips,
            ArrayGeometry::default(),
            crate::augment::default_simulation_snrs(),
            DelayMode::Nearest,
            true,
            77,
        );
        assert_ne!(redraw.doa_for(0, 0), redraw.doa_for(0, 40));

        let empty = SweepPlan::new(
            &clips,
            ArrayGeometry::default(),
            vec![],
            DelayMode::Nearest,
            false,
            77,
        );
        assert_eq!(sweep_simulations(&empty).count(), 0);
    }

    #[test]
    fn single_clip_default_sweep_has_41_recordings() {
        let clips = vec![tone_clip(4000)];
        let plan = SweepPlan::new(
            &clips,
            ArrayGeometry::default(),
            crate::augment::default_simulation_snrs(),
            DelayMode::Nearest,
            false,
            1,
        );
        let recs: Vec<_> = sweep_simulations(&plan).collect::<Result<_>>().unwrap();
        assert_eq!(recs.len(), 41);
    }
}
