//! Triangular filter banks on a warped frequency axis.
//!
//! Construction: the chosen scale (Mel or reversed Mel) is divided into M+1
//! equal sections; the M+2 section boundaries are mapped back to Hz and
//! sorted ascending (a no-op for Mel, a reversal for reversed Mel). Filter k
//! is the triangle that rises from boundary k−1 to peak 1 at boundary k and
//! falls to zero at boundary k+1. Filters are indexed 1..=M by ascending
//! center frequency for both scales, so "filter M" is always the
//! highest-frequency, and for reversed Mel also the narrowest, filter.

use super::scale::{mel, mel_to_hz, rmel, rmel_to_hz, ScaleKind};
use super::{DspError, PowerSpectrum};

/// Log-energy floor: keeps `ln` finite on silent frames.
pub const ENERGY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
struct Filter {
    first_bin: usize,
    weights: Vec<f64>,
}

/// A bank of M triangular weighting windows over one-sided FFT bins.
#[derive(Debug, Clone)]
pub struct FilterBank {
    scale: ScaleKind,
    sample_rate: u32,
    nfft: usize,
    edges_hz: Vec<f64>,
    filters: Vec<Filter>,
}

impl FilterBank {
    pub fn filter_count(&self) -> usize {
        self.filters.len()
    }

    pub fn scale(&self) -> ScaleKind {
        self.scale
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn nfft(&self) -> usize {
        self.nfft
    }

    /// The M+2 triangle boundaries, ascending in Hz.
    pub fn edges_hz(&self) -> &[f64] {
        &self.edges_hz
    }

    /// Open support (left, right) of filter `k` (1-based) in Hz.
    pub fn support_hz(&self, k: usize) -> (f64, f64) {
        assert!(k >= 1 && k <= self.filters.len());
        (self.edges_hz[k - 1], self.edges_hz[k + 1])
    }

    /// Peak frequency of filter `k` (1-based) in Hz.
    pub fn center_hz(&self, k: usize) -> f64 {
        assert!(k >= 1 && k <= self.filters.len());
        self.edges_hz[k]
    }

    /// Weight of filter `k` (1-based) at FFT bin `bin`.
    pub fn weight(&self, k: usize, bin: usize) -> f64 {
        assert!(k >= 1 && k <= self.filters.len());
        let f = &self.filters[k - 1];
        if bin < f.first_bin || bin >= f.first_bin + f.weights.len() {
            0.0
        } else {
            f.weights[bin - f.first_bin]
        }
    }
}

/// Build an M-filter triangular bank for `nfft`-point one-sided spectra.
pub fn build_filterbank(
    m: usize,
    sample_rate: u32,
    nfft: usize,
    scale: ScaleKind,
) -> Result<FilterBank, DspError> {
    assert!(m >= 1, "need at least one filter");
    assert!(nfft >= 2, "nfft too small");
    let fs = f64::from(sample_rate);
    let nyquist = 0.5 * fs;

    let scale_max = match scale {
        ScaleKind::Mel => mel(nyquist)?,
        ScaleKind::RMel => rmel(0.0, fs)?,
    };
    let step = scale_max / (m + 1) as f64;

    // Boundaries mapped back to Hz; the band endpoints are pinned exactly.
    let mut edges_hz: Vec<f64> = (0..=m + 1)
        .map(|p| {
            if p == 0 {
                Ok(match scale {
                    ScaleKind::Mel => 0.0,
                    ScaleKind::RMel => nyquist,
                })
            } else if p == m + 1 {
                Ok(match scale {
                    ScaleKind::Mel => nyquist,
                    ScaleKind::RMel => 0.0,
                })
            } else {
                let v = step * p as f64;
                match scale {
                    ScaleKind::Mel => mel_to_hz(v),
                    ScaleKind::RMel => rmel_to_hz(v, fs),
                }
            }
        })
        .collect::<Result<_, _>>()?;
    if scale == ScaleKind::RMel {
        edges_hz.reverse();
    }

    let bin_hz = fs / nfft as f64;
    let n_bins = nfft / 2 + 1;
    let mut filters = Vec::with_capacity(m);
    for k in 1..=m {
        let (left, center, right) = (edges_hz[k - 1], edges_hz[k], edges_hz[k + 1]);
        let lo_bin = (left / bin_hz).ceil() as usize;
        let hi_bin = ((right / bin_hz).floor() as usize).min(n_bins - 1);
        let mut first_bin = lo_bin;
        let mut weights = Vec::new();
        for bin in lo_bin..=hi_bin.max(lo_bin) {
            if bin >= n_bins {
                break;
            }
            let f = bin as f64 * bin_hz;
            let w = if f <= center {
                if center > left {
                    (f - left) / (center - left)
                } else {
                    0.0
                }
            } else if right > center {
                (right - f) / (right - center)
            } else {
                0.0
            };
            if weights.is_empty() {
                if w > 0.0 {
                    first_bin = bin;
                    weights.push(w);
                }
            } else {
                weights.push(w);
            }
        }
        while weights.last().is_some_and(|&w| w <= 0.0) {
            weights.pop();
        }
        if weights.is_empty() {
            return Err(DspError::DegenerateFilter { filter: k });
        }
        filters.push(Filter { first_bin, weights });
    }

    Ok(FilterBank {
        scale,
        sample_rate,
        nfft,
        edges_hz,
        filters,
    })
}

/// Log filter-bank energies: `E_k = ln(max(Σ bins·w_k, floor))`.
pub fn filterbank_energies(ps: &PowerSpectrum, fb: &FilterBank) -> Result<Vec<f64>, DspError> {
    if ps.nfft != fb.nfft || ps.sample_rate != fb.sample_rate {
        return Err(DspError::MismatchedBank {
            ps_nfft: ps.nfft,
            fb_nfft: fb.nfft,
        });
    }
    Ok(energies_from_bins(&ps.bins, fb))
}

/// Same weighting applied to arbitrary per-bin values (e.g. magnitudes).
pub(crate) fn energies_from_bins(bins: &[f64], fb: &FilterBank) -> Vec<f64> {
    fb.filters
        .iter()
        .map(|f| {
            let sum: f64 = f
                .weights
                .iter()
                .zip(&bins[f.first_bin..])
                .map(|(w, b)| w * b)
                .sum();
            sum.max(ENERGY_FLOOR).ln()
        })
        .collect()
}
