//! Mel and reversed-Mel frequency scales.
//!
//! The Mel map compresses high frequencies (fine resolution at the low end);
//! the reversed-Mel map mirrors it around the band midpoint so that fine
//! resolution lands at the high end instead, where embedding noise is most
//! visible. Both use the natural logarithm with the 1127/700 parametrization.

use serde::{Deserialize, Serialize};

use super::DspError;

/// Frequency-warping axis used for filter-bank construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleKind {
    Mel,
    RMel,
}

const MEL_SCALE: f64 = 1127.0;
const MEL_BREAK: f64 = 700.0;

/// Hz → Mel: `1127 · ln(1 + f/700)`. Monotone increasing.
pub fn mel(f_hz: f64) -> Result<f64, DspError> {
    if !f_hz.is_finite() || f_hz < 0.0 {
        return Err(DspError::OutOfRange(format!("frequency {f_hz} Hz")));
    }
    Ok(MEL_SCALE * (1.0 + f_hz / MEL_BREAK).ln())
}

/// Mel → Hz inverse of [`mel`].
pub fn mel_to_hz(m: f64) -> Result<f64, DspError> {
    if !m.is_finite() || m < 0.0 {
        return Err(DspError::OutOfRange(format!("mel value {m}")));
    }
    Ok(MEL_BREAK * ((m / MEL_SCALE).exp() - 1.0))
}

/// Hz → reversed Mel: `1127 · ln(1 + (fs/2 − f)/700)`. Monotone decreasing,
/// zero at the Nyquist frequency.
pub fn rmel(f_hz: f64, fs_hz: f64) -> Result<f64, DspError> {
    let nyquist = 0.5 * fs_hz;
    if !f_hz.is_finite() || f_hz < 0.0 || f_hz > nyquist {
        return Err(DspError::OutOfRange(format!(
            "frequency {f_hz} Hz outside [0, {nyquist}]"
        )));
    }
    Ok(MEL_SCALE * (1.0 + (nyquist - f_hz) / MEL_BREAK).ln())
}

/// Reversed Mel → Hz inverse of [`rmel`].
pub fn rmel_to_hz(v: f64, fs_hz: f64) -> Result<f64, DspError> {
    if !v.is_finite() || v < 0.0 {
        return Err(DspError::OutOfRange(format!("r-mel value {v}")));
    }
    let f = 0.5 * fs_hz - MEL_BREAK * ((v / MEL_SCALE).exp() - 1.0);
    if f < -1e-6 {
        return Err(DspError::OutOfRange(format!("r-mel value {v}")));
    }
    Ok(f.max(0.0))
}
