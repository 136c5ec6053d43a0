//! Steganalysis workbench for 16-bit PCM audio.
//!
//! The crate covers the full desk-scale experiment loop:
//!
//! - **audio_io**: RIFF/WAVE parsing and writing, mono downmix, framing.
//! - **dsp**: second-order derivatives, DFT power spectra, Mel and
//!   reversed-Mel scales, triangular filter banks, log-energies, cepstra,
//!   sub-band energies and Welch PSD estimates.
//! - **embed**: data-hiding algorithms used to build stego corpora and to
//!   re-embed for calibration (multi-plane LSB replacement, rate-controlled
//!   ±1 LSB matching, integer-wavelet LSB, multiplicative DCT watermarking,
//!   additive spread spectrum in time and DCT domains).
//! - **analysis**: steganography noise, its PMF, bit-planes, bit error rates
//!   and per-plane sensitivity reports over corpora.
//! - **features**: re-embedding calibration and the 4·M moment features of
//!   per-frame reversed-Mel log-energy differences, plus non-calibrated
//!   cepstral baselines.
//! - **ml**: feature normalization, an SMO-based SVM, stratified k-fold
//!   cross-validation, genetic-algorithm feature selection and ANOVA F-tests.
//! - **corpus** / **cli**: synthetic cover generation, corpus manifests and
//!   the batch command layer behind the `stegscope` binary.
//!
//! Most capabilities have a runnable demo under `examples/`; start with
//! `cargo run --release --example sensitivity_table`.

pub mod analysis;
pub mod audio_io;
pub mod cli;
pub mod corpus;
pub mod dsp;
pub mod embed;
pub mod features;
pub mod ml;

use serde::{Deserialize, Serialize};

/// Class label attached to clips, manifest rows and dataset entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Label {
    Cover,
    Stego,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Cover => "COVER",
            Label::Stego => "STEGO",
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "COVER" => Ok(Label::Cover),
            "STEGO" => Ok(Label::Stego),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

pub use audio_io::AudioClip;
pub use embed::{EmbedderKind, EmbedderSpec};
pub use features::{CalibrationMode, CalibrationSpec};
