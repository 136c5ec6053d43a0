//! Spectral machinery: derivatives, DFT power spectra, warped-scale filter
//! banks, log-energies and cepstra, sub-band energies and Welch PSD.

mod filterbank;
mod scale;

pub use filterbank::{build_filterbank, filterbank_energies, FilterBank, ENERGY_FLOOR};
pub use scale::{mel, mel_to_hz, rmel, rmel_to_hz, ScaleKind};

pub(crate) use filterbank::energies_from_bins;

use std::cell::RefCell;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::audio_io::AudioClip;

#[derive(Debug, Error)]
pub enum DspError {
    #[error("sequence too short: need {needed}, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("bad length: {0}")]
    BadLength(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("filter {filter} spans no FFT bin")]
    DegenerateFilter { filter: usize },
    #[error("spectrum (nfft {ps_nfft}) does not match filter bank (nfft {fb_nfft})")]
    MismatchedBank { ps_nfft: usize, fb_nfft: usize },
    #[error("length mismatch: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },
}

/// One-sided power spectrum `|X(k)|²`, k = 0..=nfft/2.
#[derive(Debug, Clone)]
pub struct PowerSpectrum {
    pub bins: Vec<f64>,
    pub nfft: usize,
    pub sample_rate: u32,
}

impl PowerSpectrum {
    /// Center frequency of bin `k` in Hz.
    pub fn bin_hz(&self, k: usize) -> f64 {
        k as f64 * f64::from(self.sample_rate) / self.nfft as f64
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_in_place(buf: &mut [Complex<f64>]) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    fft.process(buf);
}

/// Discrete second central difference: `y[m] = x[m+1] − 2x[m] + x[m−1]`.
///
/// Output is two samples shorter than the input. Annihilates affine
/// sequences and maps quadratics to constants.
pub fn second_derivative(x: &[f64]) -> Result<Vec<f64>, DspError> {
    if x.len() < 3 {
        return Err(DspError::TooShort {
            needed: 3,
            got: x.len(),
        });
    }
    Ok(x.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect())
}

fn power_bins(frame: &[f64], nfft: usize) -> Vec<f64> {
    let mut buf: Vec<Complex<f64>> = frame
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(nfft)
        .collect();
    fft_in_place(&mut buf);
    buf[..=nfft / 2].iter().map(|c| c.norm_sqr()).collect()
}

/// One-sided DFT power spectrum of a zero-padded frame.
pub fn dft_power(frame: &[f64], nfft: usize, sample_rate: u32) -> Result<PowerSpectrum, DspError> {
    if !nfft.is_power_of_two() {
        return Err(DspError::BadLength(format!("nfft {nfft} not a power of two")));
    }
    if frame.len() > nfft {
        return Err(DspError::BadLength(format!(
            "frame length {} exceeds nfft {nfft}",
            frame.len()
        )));
    }
    Ok(PowerSpectrum {
        bins: power_bins(frame, nfft),
        nfft,
        sample_rate,
    })
}

/// Magnitude of the length-M inverse DFT of a (log-)energy vector.
///
/// The input is taken as already log-scaled; callers wanting the literal
/// double-log reading apply their own `ln` first.
pub fn cepstrum(log_energies: &[f64]) -> Vec<f64> {
    let m = log_energies.len();
    if m == 0 {
        return Vec::new();
    }
    // Direct O(M²) inverse transform; M is small (tens of channels).
    (0..m)
        .map(|k| {
            let mut re = 0.0;
            let mut im = 0.0;
            for (j, &e) in log_energies.iter().enumerate() {
                let phase = 2.0 * std::f64::consts::PI * (j * k) as f64 / m as f64;
                re += e * phase.cos();
                im += e * phase.sin();
            }
            (re * re + im * im).sqrt() / m as f64
        })
        .collect()
}

/// Total power in each of `l` equal sub-bands of normalized frequency
/// `[0, π]`. A bin exactly on a boundary counts toward the lower band.
pub fn band_energies(x: &[f64], l: usize) -> Vec<f64> {
    assert!(l >= 1, "need at least one band");
    let nfft = x.len().next_power_of_two().max(2);
    let bins = power_bins(x, nfft);
    let mut bands = vec![0.0; l];
    for (k, &p) in bins.iter().enumerate() {
        // band = ceil(ω·L/π) = ceil(2kL/nfft), computed exactly in integers.
        let band = if k == 0 { 1 } else { (2 * k * l).div_ceil(nfft) };
        bands[band.clamp(1, l) - 1] += p;
    }
    bands
}

/// Welch-averaged one-sided power spectrum: mean of Hann-windowed
/// periodograms, each normalized by the window energy `Σw²`.
pub fn psd_welch(
    x: &[f64],
    seg_len: usize,
    hop: usize,
    sample_rate: u32,
) -> Result<PowerSpectrum, DspError> {
    assert!(seg_len >= 2 && hop >= 1, "degenerate segmentation");
    if x.len() < seg_len {
        return Err(DspError::TooShort {
            needed: seg_len,
            got: x.len(),
        });
    }
    let window: Vec<f64> = (0..seg_len)
        .map(|n| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * n as f64 / seg_len as f64).cos()))
        .collect();
    let win_energy: f64 = window.iter().map(|w| w * w).sum();
    let nfft = seg_len.next_power_of_two();
    let n_segs = (x.len() - seg_len) / hop + 1;

    let mut acc = vec![0.0; nfft / 2 + 1];
    let mut seg = vec![0.0; seg_len];
    for i in 0..n_segs {
        for (s, (&v, w)) in seg
            .iter_mut()
            .zip(x[i * hop..i * hop + seg_len].iter().zip(&window))
        {
            *s = v * w;
        }
        for (a, p) in acc.iter_mut().zip(power_bins(&seg, nfft)) {
            *a += p;
        }
    }
    for a in &mut acc {
        *a /= n_segs as f64 * win_energy;
    }
    Ok(PowerSpectrum {
        bins: acc,
        nfft,
        sample_rate,
    })
}

/// Per-band stego/cover energy ratios `D_i = E_i(stego)/E_i(cover)`.
///
/// Bands where the cover energy is below the floor report `+∞`.
pub fn band_discriminability(
    cover: &AudioClip,
    stego: &AudioClip,
    l: usize,
) -> Result<Vec<f64>, DspError> {
    if cover.len() != stego.len() {
        return Err(DspError::LengthMismatch {
            a: cover.len(),
            b: stego.len(),
        });
    }
    let ec = band_energies(&cover.samples_f64(), l);
    let es = band_energies(&stego.samples_f64(), l);
    Ok(ec
        .iter()
        .zip(&es)
        .map(|(&c, &s)| if c < ENERGY_FLOOR { f64::INFINITY } else { s / c })
        .collect())
}
