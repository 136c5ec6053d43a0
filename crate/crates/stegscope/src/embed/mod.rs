//! Data-hiding algorithms used to generate stego corpora and to re-embed for
//! calibration.
//!
//! Every embedder is deterministic given `(cover, spec)`: the spec's seed
//! drives one ChaCha8 stream that supplies position shuffles, message bits
//! and any dither, in a fixed order. Output clips always match the cover's
//! length and rate, with samples saturated to the 16-bit range.

mod lsb;
mod spectral;
mod wavelet;

pub use spectral::{dct2_ortho, dct3_ortho};
pub use wavelet::{haar_forward, haar_inverse};

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audio_io::AudioClip;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("message does not fit: {0}")]
    CapacityExceeded(String),
    #[error("cover too short: need {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("cover must be mono (got {0} channels)")]
    NotMono(u16),
    #[error("invalid embedder spec: {0}")]
    InvalidSpec(String),
}

/// The supported data-hiding algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbedderKind {
    /// Replace the lowest `planes` bit-planes with message bits
    /// (rate-controlled single-plane replacement below 1 BPS).
    LsbReplace,
    /// ±1 LSB matching: where the LSB disagrees with the message bit, move
    /// the sample one step in a random direction.
    LsbMatch,
    /// LSB replacement inside the detail band of a one-level integer Haar
    /// lifting transform.
    IntWavelet,
    /// Multiplicative watermark `v·(1 + α·g)` on the largest-magnitude DCT
    /// coefficients, Gaussian `g`.
    CoxDct,
    /// Additive ±a chips on all non-DC DCT coefficients.
    SsDctAdd,
    /// Additive ±α chips per time-domain sample.
    SsTimeAdd,
}

impl EmbedderKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EmbedderKind::LsbReplace => "lsb_replace",
            EmbedderKind::LsbMatch => "lsb_match",
            EmbedderKind::IntWavelet => "int_wavelet",
            EmbedderKind::CoxDct => "cox_dct",
            EmbedderKind::SsDctAdd => "ss_dct_add",
            EmbedderKind::SsTimeAdd => "ss_time_add",
        }
    }
}

fn default_planes() -> u8 {
    1
}

/// Algorithm plus parameters defining one data-hiding method.
///
/// Serializes as a flat JSON object, e.g.
/// `{"kind":"lsb_match","capacity_bps":0.12,"seed":42}`; unset fields take
/// their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedderSpec {
    pub kind: EmbedderKind,
    /// Message bits per audio sample (capacity, "BPS").
    #[serde(default)]
    pub capacity_bps: f64,
    /// Bit-planes written by the LSB-replacement family.
    #[serde(default = "default_planes")]
    pub planes: u8,
    /// Watermark strength (COX α or spread-spectrum chip amplitude).
    #[serde(default)]
    pub alpha: f64,
    /// Number of largest-magnitude AC DCT coefficients touched by COX.
    #[serde(default)]
    pub n_coeffs: usize,
    /// Seed for the message / dither PRNG.
    #[serde(default)]
    pub seed: u64,
}

impl EmbedderSpec {
    pub fn lsb_replace(planes: u8, capacity_bps: f64, seed: u64) -> Self {
        EmbedderSpec {
            kind: EmbedderKind::LsbReplace,
            capacity_bps,
            planes,
            alpha: 0.0,
            n_coeffs: 0,
            seed,
        }
    }

    pub fn lsb_match(capacity_bps: f64, seed: u64) -> Self {
        EmbedderSpec {
            kind: EmbedderKind::LsbMatch,
            capacity_bps,
            planes: 1,
            alpha: 0.0,
            n_coeffs: 0,
            seed,
        }
    }

    pub fn int_wavelet(planes: u8, capacity_bps: f64, seed: u64) -> Self {
        EmbedderSpec {
            kind: EmbedderKind::IntWavelet,
            capacity_bps,
            planes,
            alpha: 0.0,
            n_coeffs: 0,
            seed,
        }
    }

    pub fn cox_dct(alpha: f64, n_coeffs: usize, seed: u64) -> Self {
        EmbedderSpec {
            kind: EmbedderKind::CoxDct,
            capacity_bps: 0.0,
            planes: 1,
            alpha,
            n_coeffs,
            seed,
        }
    }

    pub fn ss_dct_add(alpha: f64, seed: u64) -> Self {
        EmbedderSpec {
            kind: EmbedderKind::SsDctAdd,
            capacity_bps: 0.0,
            planes: 1,
            alpha,
            n_coeffs: 0,
            seed,
        }
    }

    pub fn ss_time_add(alpha: f64, seed: u64) -> Self {
        EmbedderSpec {
            kind: EmbedderKind::SsTimeAdd,
            capacity_bps: 0.0,
            planes: 1,
            alpha,
            n_coeffs: 0,
            seed,
        }
    }

    /// Same algorithm with a different message seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        EmbedderSpec { seed, ..self.clone() }
    }

    /// Check the spec's structural invariants.
    pub fn validate(&self) -> Result<(), EmbedError> {
        let err = |msg: String| Err(EmbedError::InvalidSpec(msg));
        if !self.capacity_bps.is_finite() || self.capacity_bps < 0.0 {
            return err(format!("capacity_bps {} must be ≥ 0", self.capacity_bps));
        }
        if !self.alpha.is_finite() {
            return err("alpha must be finite".into());
        }
        match self.kind {
            EmbedderKind::LsbReplace => {
                if self.capacity_bps >= 1.0 {
                    if ![1, 2, 4].contains(&self.planes) {
                        return err(format!("planes {} not in {{1,2,4}}", self.planes));
                    }
                    if self.capacity_bps != f64::from(self.planes) {
                        return err(format!(
                            "capacity {} must equal planes {} at rate ≥ 1",
                            self.capacity_bps, self.planes
                        ));
                    }
                } else if self.planes != 1 {
                    return err("rate-controlled replacement uses a single plane".into());
                }
            }
            EmbedderKind::LsbMatch => {
                if self.capacity_bps > 1.0 {
                    return err(format!("matching capacity {} exceeds 1 BPS", self.capacity_bps));
                }
            }
            EmbedderKind::IntWavelet => {
                if self.planes == 0 || self.planes > 16 {
                    return err(format!("planes {} not in 1..=16", self.planes));
                }
                if self.capacity_bps > f64::from(self.planes) {
                    return err(format!(
                        "capacity {} exceeds planes {}",
                        self.capacity_bps, self.planes
                    ));
                }
            }
            EmbedderKind::CoxDct => {
                if self.n_coeffs == 0 {
                    return err("cox_dct needs n_coeffs ≥ 1".into());
                }
            }
            EmbedderKind::SsDctAdd | EmbedderKind::SsTimeAdd => {}
        }
        Ok(())
    }
}

/// Apply `spec` to a mono cover. Deterministic; preserves length and rate.
pub fn embed(cover: &AudioClip, spec: &EmbedderSpec) -> Result<AudioClip, EmbedError> {
    spec.validate()?;
    if cover.channel_count != 1 {
        return Err(EmbedError::NotMono(cover.channel_count));
    }
    if cover.is_empty() {
        return Err(EmbedError::TooShort { needed: 1, got: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let samples = match spec.kind {
        EmbedderKind::LsbReplace => {
            lsb::lsb_replace(&cover.samples, spec.planes, spec.capacity_bps, &mut rng)
        }
        EmbedderKind::LsbMatch => lsb::lsb_match(&cover.samples, spec.capacity_bps, &mut rng),
        EmbedderKind::IntWavelet => {
            wavelet::int_wavelet_embed(&cover.samples, spec.planes, spec.capacity_bps, &mut rng)?
        }
        EmbedderKind::CoxDct => {
            spectral::cox_dct_embed(&cover.samples, spec.alpha, spec.n_coeffs, &mut rng)?
        }
        EmbedderKind::SsDctAdd => spectral::ss_dct_add(&cover.samples, spec.alpha, &mut rng),
        EmbedderKind::SsTimeAdd => spectral::ss_time_add(&cover.samples, spec.alpha, &mut rng),
    };
    debug_assert_eq!(samples.len(), cover.samples.len());
    Ok(AudioClip {
        samples,
        sample_rate: cover.sample_rate,
        channel_count: 1,
    })
}

/// Next i.i.d. uniform message bit.
pub(crate) fn next_bit(rng: &mut ChaCha8Rng) -> u16 {
    (rng.next_u32() & 1) as u16
}

/// `k` distinct positions in `0..n` from a seeded shuffle, ascending.
pub(crate) fn choose_positions(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx.truncate(k);
    idx.sort_unstable();
    idx
}

pub(crate) fn saturate(v: f64) -> i16 {
    v.round().clamp(f64::from(i16::MIN), f64::from(i16::MAX)) as i16
}
