//! PCM WAV input/output and frame segmentation.
//!
//! Only RIFF/WAVE with format code 1 (integer PCM) at 16 bits per sample is
//! accepted; unknown chunks before `data` are skipped. Writing then reading a
//! clip is bit-exact.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AudioError {
    #[error("not a RIFF/WAVE file")]
    NotWav,
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("data chunk shorter than declared")]
    Truncated,
    #[error("signal too short: need {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Integer PCM samples plus sampling metadata.
///
/// Multi-channel clips keep their samples interleaved until
/// [`downmix_mono`]; all analysis and embedding operates on mono clips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AudioClip {
    pub samples: Vec<i16>,
    pub sample_rate: u32,
    pub channel_count: u16,
}

impl AudioClip {
    /// Single-channel clip.
    pub fn mono(samples: Vec<i16>, sample_rate: u32) -> Self {
        assert!(sample_rate > 0, "sample_rate must be positive");
        AudioClip {
            samples,
            sample_rate,
            channel_count: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Samples widened to `f64` for spectral processing.
    pub fn samples_f64(&self) -> Vec<f64> {
        self.samples.iter().map(|&s| f64::from(s)).collect()
    }
}

/// Fixed-length analysis frames cut from a real-valued sequence.
///
/// Frame `i` starts at `i * hop`; trailing samples that do not fill a whole
/// frame are discarded.
#[derive(Debug, Clone)]
pub struct FrameSet {
    frames: Vec<Vec<f64>>,
    frame_len: usize,
    hop: usize,
}

impl FrameSet {
    pub fn frames(&self) -> &[Vec<f64>] {
        &self.frames
    }

    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

const RIFF: &[u8; 4] = b"RIFF";
const WAVE: &[u8; 4] = b"WAVE";
const FMT: &[u8; 4] = b"fmt ";
const DATA: &[u8; 4] = b"data";

/// Read a 16-bit PCM WAV file. Multi-channel data stays interleaved.
pub fn read_wav<P: AsRef<Path>>(path: P) -> Result<AudioClip, AudioError> {
    let mut reader = BufReader::new(File::open(path)?);

    let mut header = [0u8; 12];
    reader.read_exact(&mut header).map_err(|_| AudioError::NotWav)?;
    if &header[0..4] != RIFF || &header[8..12] != WAVE {
        return Err(AudioError::NotWav);
    }

    let mut fmt: Option<(u16, u16, u32)> = None; // (format code, channels, rate)
    loop {
        let mut chunk_header = [0u8; 8];
        if reader.read_exact(&mut chunk_header).is_err() {
            // Ran out of chunks without seeing `data`.
            return Err(AudioError::Truncated);
        }
        let id: [u8; 4] = chunk_header[0..4].try_into().unwrap();
        let size = u32::from_le_bytes(chunk_header[4..8].try_into().unwrap()) as usize;

        if &id == FMT {
            if size < 16 {
                return Err(AudioError::UnsupportedFormat("fmt chunk too small".into()));
            }
            let mut body = vec![0u8; size];
            reader.read_exact(&mut body).map_err(|_| AudioError::Truncated)?;
            let format = u16::from_le_bytes([body[0], body[1]]);
            let channels = u16::from_le_bytes([body[2], body[3]]);
            let rate = u32::from_le_bytes([body[4], body[5], body[6], body[7]]);
            let bits = u16::from_le_bytes([body[14], body[15]]);
            if format != 1 {
                return Err(AudioError::UnsupportedFormat(format!(
                    "audio format code {format}, expected 1 (PCM)"
                )));
            }
            if bits != 16 {
                return Err(AudioError::UnsupportedFormat(format!(
                    "{bits} bits per sample, expected 16"
                )));
            }
            if channels == 0 || rate == 0 {
                return Err(AudioError::UnsupportedFormat(
                    "zero channel count or sample rate".into(),
                ));
            }
            fmt = Some((format, channels, rate));
        } else if &id == DATA {
            let (_, channels, rate) = fmt.ok_or_else(|| {
                AudioError::UnsupportedFormat("data chunk before fmt".into())
            })?;
            let mut body = vec![0u8; size];
            reader.read_exact(&mut body).map_err(|_| AudioError::Truncated)?;
            let mut samples: Vec<i16> = body
                .chunks_exact(2)
                .map(|b| i16::from_le_bytes([b[0], b[1]]))
                .collect();
            // Keep whole interleaved frames only.
            let whole = samples.len() / channels as usize * channels as usize;
            samples.truncate(whole);
            return Ok(AudioClip {
                samples,
                sample_rate: rate,
                channel_count: channels,
            });
        } else {
            // Unknown chunk: skip body plus the word-alignment pad byte.
            let skip = size + (size & 1);
            let mut remaining = skip as u64;
            let copied = io::copy(&mut (&mut reader).take(remaining), &mut io::sink())?;
            remaining -= copied;
            if remaining > 0 {
                return Err(AudioError::Truncated);
            }
        }
    }
}

/// Write a clip as a canonical 44-byte-header PCM WAV file.
pub fn write_wav<P: AsRef<Path>>(clip: &AudioClip, path: P) -> Result<(), AudioError> {
    let mut w = BufWriter::new(File::create(path)?);
    let data_len = (clip.samples.len() * 2) as u32;
    let channels = clip.channel_count;
    let byte_rate = clip.sample_rate * u32::from(channels) * 2;
    let block_align = channels * 2;

    w.write_all(RIFF)?;
    w.write_all(&(36 + data_len).to_le_bytes())?;
    w.write_all(WAVE)?;
    w.write_all(FMT)?;
    w.write_all(&16u32.to_le_bytes())?;
    w.write_all(&1u16.to_le_bytes())?; // PCM
    w.write_all(&channels.to_le_bytes())?;
    w.write_all(&clip.sample_rate.to_le_bytes())?;
    w.write_all(&byte_rate.to_le_bytes())?;
    w.write_all(&block_align.to_le_bytes())?;
    w.write_all(&16u16.to_le_bytes())?; // bits per sample
    w.write_all(DATA)?;
    w.write_all(&data_len.to_le_bytes())?;
    for s in &clip.samples {
        w.write_all(&s.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Average interleaved channels into one, rounding half away from zero.
pub fn downmix_mono(clip: &AudioClip) -> AudioClip {
    if clip.channel_count <= 1 {
        return clip.clone();
    }
    let ch = clip.channel_count as usize;
    let samples = clip
        .samples
        .chunks_exact(ch)
        .map(|frame| {
            let sum: f64 = frame.iter().map(|&s| f64::from(s)).sum();
            // f64::round rounds half away from zero.
            (sum / ch as f64).round() as i16
        })
        .collect();
    AudioClip {
        samples,
        sample_rate: clip.sample_rate,
        channel_count: 1,
    }
}

/// Cut `x` into frames of `frame_len` samples spaced `hop` apart.
pub fn segment(x: &[f64], frame_len: usize, hop: usize) -> Result<FrameSet, AudioError> {
    assert!(frame_len > 0, "frame_len must be positive");
    assert!(hop > 0 && hop <= frame_len, "hop must be in 1..=frame_len");
    if x.len() < frame_len {
        return Err(AudioError::TooShort {
            needed: frame_len,
            got: x.len(),
        });
    }
    let count = (x.len() - frame_len) / hop + 1;
    let frames = (0..count)
        .map(|i| x[i * hop..i * hop + frame_len].to_vec())
        .collect();
    Ok(FrameSet {
        frames,
        frame_len,
        hop,
    })
}
