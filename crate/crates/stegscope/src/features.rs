//! Calibrated reversed-Mel energy features.
//!
//! The signal under inspection is re-embedded with a random message (the
//! calibration twin), both signals pass through a second-order derivative
//! and are segmented; per frame, M warped-scale log filter-bank energies are
//! computed; per frame and channel the twin's energy is subtracted; and the
//! per-channel difference sequences are summarized by four statistical
//! moments. With M = 29 this yields 116 features per clip.
//!
//! Non-calibrated cepstral baselines (MFCC, D2-MFCC, R-MFCC) share steps
//! 3..6 of the pipeline without the re-embedding and differencing steps.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::audio_io::{segment, AudioClip};
use crate::dsp::{
    build_filterbank, cepstrum, dft_power, energies_from_bins, filterbank_energies,
    second_derivative, DspError, ScaleKind,
};
use crate::embed::{embed, EmbedError, EmbedderSpec};
use crate::Label;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("clip too short: need {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Dsp(#[from] DspError),
    #[error("empty input")]
    Empty,
}

/// How the calibration twin is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CalibrationMode {
    /// Re-embed with the suspected algorithm.
    Targeted,
    /// Re-embed with full-rate single-plane LSB replacement, the most
    /// sensitive plane under every tested algorithm.
    Universal,
}

/// Re-embedding recipe for calibration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSpec {
    pub reembedder: EmbedderSpec,
    pub mode: CalibrationMode,
    /// Fixed message seed; when unset the seed is derived from the clip
    /// content hash so calibration needs no stored per-clip state.
    #[serde(default)]
    pub seed_override: Option<u64>,
}

impl CalibrationSpec {
    /// Universal calibration: 1-LSB replacement at full rate.
    pub fn universal() -> Self {
        CalibrationSpec {
            reembedder: EmbedderSpec::lsb_replace(1, 1.0, 0),
            mode: CalibrationMode::Universal,
            seed_override: None,
        }
    }

    /// Targeted calibration with a known embedding algorithm.
    pub fn targeted(reembedder: EmbedderSpec) -> Self {
        CalibrationSpec {
            reembedder,
            mode: CalibrationMode::Targeted,
            seed_override: None,
        }
    }

    pub fn with_seed_override(mut self, seed: Option<u64>) -> Self {
        self.seed_override = seed;
        self
    }
}

/// Message seed derived from the clip content, so that calibration is a
/// pure function of the samples.
fn content_seed(clip: &AudioClip) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(clip.sample_rate.to_le_bytes());
    for s in &clip.samples {
        hasher.update(s.to_le_bytes());
    }
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

/// Produce the calibration twin `x̃` of a clip.
///
/// Universal mode always re-embeds with full-rate 1-LSB replacement, no
/// matter what the `reembedder` field says.
pub fn reembed(x: &AudioClip, calib: &CalibrationSpec) -> Result<AudioClip, FeatureError> {
    let reembedder = match calib.mode {
        CalibrationMode::Universal => EmbedderSpec::lsb_replace(1, 1.0, 0),
        CalibrationMode::Targeted => calib.reembedder.clone(),
    };
    let seed = calib.seed_override.unwrap_or_else(|| content_seed(x));
    Ok(embed(x, &reembedder.with_seed(seed))?)
}

/// Population moments of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

/// Mean, standard deviation, skewness and kurtosis (population forms,
/// division by n). Degenerate inputs with zero variance report zero
/// skewness and kurtosis so downstream features stay finite.
pub fn moments(v: &[f64]) -> Result<Moments, FeatureError> {
    if v.is_empty() {
        return Err(FeatureError::Empty);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let m2 = v.iter().map(|&x| (x - mean).powi(2)).sum::<f64>() / n;
    let sd = m2.sqrt();
    if sd == 0.0 {
        return Ok(Moments {
            mean,
            sd: 0.0,
            skewness: 0.0,
            kurtosis: 0.0,
        });
    }
    let m3 = v.iter().map(|&x| (x - mean).powi(3)).sum::<f64>() / n;
    let m4 = v.iter().map(|&x| (x - mean).powi(4)).sum::<f64>() / n;
    Ok(Moments {
        mean,
        sd,
        skewness: m3 / sd.powi(3),
        kurtosis: m4 / (m2 * m2),
    })
}

/// Which per-bin statistic feeds the filter bank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMode {
    /// `|X(k)|²` (default).
    Power,
    /// `|X(k)|`.
    Magnitude,
}

/// Knobs of the feature pipeline. Defaults are the detector's standard
/// setup: 29 channels, 1024-sample frames with 512-sample hop,
/// reversed-Mel scale, power spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractorConfig {
    pub channels: usize,
    pub frame_len: usize,
    pub hop: usize,
    pub scale: ScaleKind,
    pub spectrum: SpectrumMode,
}

impl Default for ExtractorConfig {
    fn default() -> Self {
        ExtractorConfig {
            channels: 29,
            frame_len: 1024,
            hop: 512,
            scale: ScaleKind::RMel,
            spectrum: SpectrumMode::Power,
        }
    }
}

/// A clip's feature values, channel-major: channel 1's (μ, σ, s, k), then
/// channel 2's, and so on — `4·channels` values in total.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub label: Option<Label>,
}

fn frame_energies(
    frames: &crate::audio_io::FrameSet,
    fb: &crate::dsp::FilterBank,
    sample_rate: u32,
    spectrum: SpectrumMode,
) -> Result<Vec<Vec<f64>>, FeatureError> {
    frames
        .frames()
        .iter()
        .map(|frame| {
            let ps = dft_power(frame, frames.frame_len(), sample_rate)?;
            Ok(match spectrum {
                SpectrumMode::Power => filterbank_energies(&ps, fb)?,
                SpectrumMode::Magnitude => {
                    let mags: Vec<f64> = ps.bins.iter().map(|b| b.sqrt()).collect();
                    energies_from_bins(&mags, fb)
                }
            })
        })
        .collect()
}

fn moments_over_channels(per_frame: &[Vec<f64>], channels: usize) -> Result<Vec<f64>, FeatureError> {
    let mut values = Vec::with_capacity(4 * channels);
    let mut column = vec![0.0; per_frame.len()];
    for ch in 0..channels {
        for (slot, frame) in column.iter_mut().zip(per_frame) {
            *slot = frame[ch];
        }
        let m = moments(&column)?;
        values.extend_from_slice(&[m.mean, m.sd, m.skewness, m.kurtosis]);
    }
    Ok(values)
}

/// Calibrated features with the default pipeline at `m` channels.
pub fn extract_features(
    x: &AudioClip,
    calib: &CalibrationSpec,
    m: usize,
) -> Result<FeatureVector, FeatureError> {
    extract_features_cfg(
        x,
        calib,
        &ExtractorConfig {
            channels: m,
            ..ExtractorConfig::default()
        },
    )
}

/// Calibrated features: re-embed, differentiate both signals, segment,
/// take per-frame warped log-energies, difference against the twin, and
/// summarize each channel with four moments.
pub fn extract_features_cfg(
    x: &AudioClip,
    calib: &CalibrationSpec,
    cfg: &ExtractorConfig,
) -> Result<FeatureVector, FeatureError> {
    let needed = cfg.frame_len + 2;
    if x.len() < needed {
        return Err(FeatureError::TooShort {
            needed,
            got: x.len(),
        });
    }

    // Re-embedding happens on raw samples; the derivative is applied to
    // both signals afterwards (embedding a derivative is not the same).
    let twin = reembed(x, calib)?;
    let y = second_derivative(&x.samples_f64())?;
    let y_twin = second_derivative(&twin.samples_f64())?;

    let frames = segment(&y, cfg.frame_len, cfg.hop).map_err(|_| FeatureError::TooShort {
        needed,
        got: x.len(),
    })?;
    let twin_frames = segment(&y_twin, cfg.frame_len, cfg.hop).unwrap();

    let fb = build_filterbank(cfg.channels, x.sample_rate, cfg.frame_len, cfg.scale)?;
    let e = frame_energies(&frames, &fb, x.sample_rate, cfg.spectrum)?;
    let e_twin = frame_energies(&twin_frames, &fb, x.sample_rate, cfg.spectrum)?;

    let diffs: Vec<Vec<f64>> = e
        .iter()
        .zip(&e_twin)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
        .collect();

    let values = moments_over_channels(&diffs, cfg.channels)?;
    debug_assert!(values.iter().all(|v| v.is_finite()));
    Ok(FeatureVector {
        values,
        label: None,
    })
}

/// Non-calibrated cepstral baselines for comparison experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineKind {
    /// Mel-scale cepstra of the raw signal.
    Mfcc,
    /// Mel-scale cepstra of the second derivative.
    D2Mfcc,
    /// Reversed-Mel cepstra of the raw signal.
    Rmfcc,
}

impl BaselineKind {
    fn scale(&self) -> ScaleKind {
        match self {
            BaselineKind::Mfcc | BaselineKind::D2Mfcc => ScaleKind::Mel,
            BaselineKind::Rmfcc => ScaleKind::RMel,
        }
    }

    fn derivative(&self) -> bool {
        matches!(self, BaselineKind::D2Mfcc)
    }
}

/// Moment features of per-frame cepstral coefficients, without calibration.
///
/// `double_log` applies the literal extra logarithm to the (already
/// log-scaled) band energies before the inverse transform; energies are
/// floored to stay real.
pub fn extract_baseline(
    x: &AudioClip,
    kind: BaselineKind,
    cfg: &ExtractorConfig,
    double_log: bool,
) -> Result<FeatureVector, FeatureError> {
    let needed = cfg.frame_len + 2;
    if x.len() < needed {
        return Err(FeatureError::TooShort {
            needed,
            got: x.len(),
        });
    }
    let signal = if kind.derivative() {
        second_derivative(&x.samples_f64())?
    } else {
        x.samples_f64()
    };
    let frames = segment(&signal, cfg.frame_len, cfg.hop).map_err(|_| FeatureError::TooShort {
        needed,
        got: x.len(),
    })?;
    let fb = build_filterbank(cfg.channels, x.sample_rate, cfg.frame_len, kind.scale())?;
    let energies = frame_energies(&frames, &fb, x.sample_rate, cfg.spectrum)?;

    let per_frame: Vec<Vec<f64>> = energies
        .iter()
        .map(|e| {
            if double_log {
                let logged: Vec<f64> = e.iter().map(|&v| v.abs().max(1e-12).ln()).collect();
                cepstrum(&logged)
            } else {
                cepstrum(e)
            }
        })
        .collect();

    let values = moments_over_channels(&per_frame, cfg.channels)?;
    Ok(FeatureVector {
        values,
        label: None,
    })
}
