//! Minimal RIFF/WAVE reader and writer.
//!
//! Supports the two encodings the dataset uses: 8-bit unsigned and 16-bit
//! signed little-endian PCM. Samples normalize to [-1, 1] on read
//! (8-bit: (x - 128)/128, 16-bit: x/32768) and quantize with clamping on
//! write, so a round trip is exact to within one quantization step.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn bits(self) -> u16 {
        match self {
            BitDepth::Eight => 8,
            BitDepth::Sixteen => 16,
        }
    }
}

/// Decoded WAV payload: one `Vec<f64>` per channel, all equal length.
#[derive(Debug, Clone)]
pub struct WavData {
    pub channels: Vec<Vec<f64>>,
    pub sample_rate: u32,
    pub bit_depth: BitDepth,
}

fn read_u16(bytes: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([bytes[at], bytes[at + 1]])
}

fn read_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]])
}

/// Read and decode a WAV file into per-channel normalized samples.
pub fn read_wav_channels(path: &Path) -> Result<WavData> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let not_wav = |detail: &str| Error::NotWav {
        path: path.to_path_buf(),
        detail: detail.to_string(),
    };

    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(not_wav("missing RIFF/WAVE header"));
    }

    // Walk the chunk list; only `fmt ` and `data` matter here.
    let mut fmt: Option<(u16, u16, u32, u16)> = None; // (format, channels, rate, bits)
    let mut data: Option<&[u8]> = None;
    let mut at = 12;
    while at + 8 <= bytes.len() {
        let id = &bytes[at..at + 4];
        let size = read_u32(&bytes, at + 4) as usize;
        let body_start = at + 8;
        let body_end = body_start.checked_add(size).ok_or_else(|| not_wav("chunk size overflow"))?;
        if body_end > bytes.len() {
            return Err(not_wav("truncated chunk"));
        }
        let body = &bytes[body_start..body_end];
        match id {
            b"fmt " => {
                if size < 16 {
                    return Err(not_wav("fmt chunk too short"));
                }
                fmt = Some((
                    read_u16(body, 0),
                    read_u16(body, 2),
                    read_u32(body, 4),
                    read_u16(body, 14),
                ));
            }
            b"data" => data = Some(body),
            _ => {}
        }
        // Chunks are word-aligned; odd sizes carry a pad byte.
        at = body_end + (size & 1);
    }

    let (format_tag, num_channels, sample_rate, bits) =
        fmt.ok_or_else(|| not_wav("no fmt chunk"))?;
    let data = data.ok_or_else(|| not_wav("no data chunk"))?;

    if format_tag != 1 {
        return Err(Error::NonPcm {
            path: path.to_path_buf(),
            format_tag,
        });
    }
    if num_channels == 0 {
        return Err(not_wav("zero channels"));
    }
    if sample_rate == 0 {
        return Err(not_wav("zero sample rate"));
    }
    let bit_depth = match bits {
        8 => BitDepth::Eight,
        16 => BitDepth::Sixteen,
        other => {
            return Err(Error::UnsupportedBitDepth {
                path: path.to_path_buf(),
                bits: other,
            })
        }
    };
    if data.is_empty() {
        return Err(Error::EmptyPayload {
            path: path.to_path_buf(),
        });
    }

    let nch = num_channels as usize;
    let bytes_per_sample = (bits / 8) as usize;
    let frame_bytes = bytes_per_sample * nch;
    let n_frames = data.len() / frame_bytes;
    if n_frames == 0 {
        return Err(Error::EmptyPayload {
            path: path.to_path_buf(),
        });
    }

    let mut channels = vec![Vec::with_capacity(n_frames); nch];
    match bit_depth {
        BitDepth::Eight => {
            for frame in 0..n_frames {
                for (ch, out) in channels.iter_mut().enumerate() {
                    let b = data[frame * frame_bytes + ch];
                    out.push((b as f64 - 128.0) / 128.0);
                }
            }
        }
        BitDepth::Sixteen => {
            for frame in 0..n_frames {
                for (ch, out) in channels.iter_mut().enumerate() {
                    let at = frame * frame_bytes + 2 * ch;
                    let s = i16::from_le_bytes([data[at], data[at + 1]]);
                    out.push(s as f64 / 32768.0);
                }
            }
        }
    }

    Ok(WavData {
        channels,
        sample_rate,
        bit_depth,
    })
}

fn quantize_u8(x: f64) -> u8 {
    (x * 128.0 + 128.0).round().clamp(0.0, 255.0) as u8
}

fn quantize_i16(x: f64) -> i16 {
    (x * 32768.0).round().clamp(-32768.0, 32767.0) as i16
}

/// Encode interleaved PCM and write the file.
pub fn write_wav_channels(
    path: &Path,
    channels: &[Vec<f64>],
    sample_rate: u32,
    bit_depth: BitDepth,
) -> Result<()> {
    if channels.is_empty() || channels[0].is_empty() {
        return Err(Error::EmptyInput("write_wav: no samples"));
    }
    let n = channels[0].len();
    if channels.iter().any(|c| c.len() != n) {
        return Err(Error::ChannelLengthMismatch(
            channels.iter().map(|c| c.len()).collect(),
        ));
    }

    let nch = channels.len() as u16;
    let bytes_per_sample = (bit_depth.bits() / 8) as u32;
    let block_align = bytes_per_sample * nch as u32;
    let data_len = block_align * n as u32;

    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&nch.to_le_bytes());
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * block_align).to_le_bytes());
    out.extend_from_slice(&(block_align as u16).to_le_bytes());
    out.extend_from_slice(&bit_depth.bits().to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());

    for frame in 0..n {
        for ch in channels {
            match bit_depth {
                BitDepth::Eight => out.push(quantize_u8(ch[frame])),
                BitDepth::Sixteen => out.extend_from_slice(&quantize_i16(ch[frame]).to_le_bytes()),
            }
        }
    }

    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&out).map_err(|e| Error::io(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("beamsed-wav-tests");
        fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    fn raw_wav(format_tag: u16, channels: u16, rate: u32, bits: u16, payload: &[u8]) -> Vec<u8> {
        let mut out = Vec::new();
        let data_len = payload.len() as u32;
        out.extend_from_slice(b"RIFF");
        out.extend_from_slice(&(36 + data_len).to_le_bytes());
        out.extend_from_slice(b"WAVE");
        out.extend_from_slice(b"fmt ");
        out.extend_from_slice(&16u32.to_le_bytes());
        out.extend_from_slice(&format_tag.to_le_bytes());
        out.extend_from_slice(&channels.to_le_bytes());
        out.extend_from_slice(&rate.to_le_bytes());
        out.extend_from_slice(&(rate * channels as u32 * (bits / 8) as u32).to_le_bytes());
        out.extend_from_slice(&(channels * (bits / 8)).to_le_bytes());
        out.extend_from_slice(&bits.to_le_bytes());
        out.extend_from_slice(b"data");
        out.extend_from_slice(&data_len.to_le_bytes());
        out.extend_from_slice(payload);
        out
    }

    #[test]
    fn eight_bit_normalization() {
        let path = tmp("u8.wav");
        fs::write(&path, raw_wav(1, 1, 16000, 8, &[128, 255, 0])).unwrap();
        let wav = read_wav_channels(&path).unwrap();
        assert_eq!(wav.channels[0], vec![0.0, 0.9921875, -1.0]);
        assert_eq!(wav.sample_rate, 16000);
    }

    #[test]
    fn sixteen_bit_normalization() {
        let path = tmp("i16.wav");
        let mut payload = Vec::new();
        payload.extend_from_slice(&0i16.to_le_bytes());
        payload.extend_from_slice(&16384i16.to_le_bytes());
        fs::write(&path, raw_wav(1, 1, 16000, 16, &payload)).unwrap();
        let wav = read_wav_channels(&path).unwrap();
        assert_eq!(wav.channels[0], vec![0.0, 0.5]);
    }

    #[test]
    fn quantizer_edges() {
        assert_eq!(quantize_i16(0.0), 0);
        assert_eq!(quantize_i16(1.0), 32767);
        assert_eq!(quantize_i16(-1.0), -32768);
        assert_eq!(quantize_u8(1.0), 255);
        assert_eq!((quantize_u8(1.0) as f64 - 128.0) / 128.0, 0.9921875);
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_wav_channels(Path::new("/nonexistent/nope.wav")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn non_pcm_is_reported_distinctly() {
        let path = tmp("float.wav");
        fs::write(&path, raw_wav(3, 1, 16000, 32, &[0u8; 8])).unwrap();
        let err = read_wav_channels(&path).unwrap_err();
        assert!(matches!(err, Error::NonPcm { format_tag: 3, .. }));
    }

    #[test]
    fn empty_payload_is_reported_distinctly() {
        let path = tmp("empty.wav");
        fs::write(&path, raw_wav(1, 1, 16000, 16, &[])).unwrap();
        let err = read_wav_channels(&path).unwrap_err();
        assert!(matches!(err, Error::EmptyPayload { .. }));
    }

    #[test]
    fn unsupported_depth_is_reported() {
        let path = tmp("b24.wav");
        fs::write(&path, raw_wav(1, 1, 16000, 24, &[0u8; 6])).unwrap();
        let err = read_wav_channels(&path).unwrap_err();
        assert!(matches!(err, Error::UnsupportedBitDepth { bits: 24, .. }));
    }

    #[test]
    fn multichannel_roundtrip_interleaving() {
        let path = tmp("stereo.wav");
        let left = vec![0.25, -0.5, 0.75];
        let right = vec![-0.25, 0.5, -0.75];
        write_wav_channels(&path, &[left.clone(), right.clone()], 16000, BitDepth::Sixteen)
            .unwrap();
        let wav = read_wav_channels(&path).unwrap();
        assert_eq!(wav.channels.len(), 2);
        for (a, b) in wav.channels[0].iter().zip(&left) {
            assert!((a - b).abs() <= 1.0 / 32768.0);
        }
        for (a, b) in wav.channels[1].iter().zip(&right) {
            assert!((a - b).abs() <= 1.0 / 32768.0);
        }
    }

    #[test]
    fn skips_extra_chunks() {
        let path = tmp("extra.wav");
        let mut bytes = raw_wav(1, 1, 8000, 8, &[128, 129]);
        // Splice a LIST chunk between header and fmt by rebuilding.
        let mut with_list = Vec::new();
        with_list.extend_from_slice(&bytes[..12]);
        with_list.extend_from_slice(b"LIST");
        with_list.extend_from_slice(&3u32.to_le_bytes());
        with_list.extend_from_slice(b"abc\0"); // odd size + pad byte
        with_list.extend_from_slice(&bytes[12..]);
        bytes = with_list;
        fs::write(&path, bytes).unwrap();
        let wav = read_wav_channels(&path).unwrap();
        assert_eq!(wav.channels[0].len(), 2);
    }
}
