//! DCT-domain watermarking and additive spread spectrum.

use std::cell::RefCell;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustdct::{Dct2, Dct3, DctPlanner};

use super::{next_bit, saturate, EmbedError};

thread_local! {
    static DCT_PLANNER: RefCell<DctPlanner<f64>> = RefCell::new(DctPlanner::new());
}

fn plan_dct2(len: usize) -> Arc<dyn Dct2<f64>> {
    DCT_PLANNER.with(|p| p.borrow_mut().plan_dct2(len))
}

fn plan_dct3(len: usize) -> Arc<dyn Dct3<f64>> {
    DCT_PLANNER.with(|p| p.borrow_mut().plan_dct3(len))
}

/// Orthonormal DCT-II: `c_k = s_k Σ_n x_n cos(πk(2n+1)/(2N))` with
/// `s_0 = √(1/N)`, `s_k = √(2/N)`.
pub fn dct2_ortho(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    assert!(n > 0);
    let mut buf = x.to_vec();
    plan_dct2(n).process_dct2(&mut buf);
    let s0 = (1.0 / n as f64).sqrt();
    let sk = (2.0 / n as f64).sqrt();
    buf[0] *= s0;
    for v in &mut buf[1..] {
        *v *= sk;
    }
    buf
}

/// Inverse of [`dct2_ortho`] (an orthonormal DCT-III).
pub fn dct3_ortho(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    assert!(n > 0);
    let s0 = (1.0 / n as f64).sqrt();
    let sk = (2.0 / n as f64).sqrt();
    let mut buf = c.to_vec();
    // rustdct's DCT-III halves the first input internally.
    buf[0] *= 2.0 * s0;
    for v in &mut buf[1..] {
        *v *= sk;
    }
    plan_dct3(n).process_dct3(&mut buf);
    buf
}

/// Multiplicative watermark on the `n_coeffs` largest-magnitude AC
/// coefficients of the full-signal DCT: `v ← v·(1 + α·g)`, `g ~ N(0,1)`.
pub(super) fn cox_dct_embed(
    samples: &[i16],
    alpha: f64,
    n_coeffs: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<i16>, EmbedError> {
    if samples.len() <= n_coeffs {
        return Err(EmbedError::TooShort {
            needed: n_coeffs + 1,
            got: samples.len(),
        });
    }
    let x: Vec<f64> = samples.iter().map(|&s| f64::from(s)).collect();
    let mut coeffs = dct2_ortho(&x);

    // Largest-|v| AC coefficients; ties broken by index for determinism.
    let mut order: Vec<usize> = (1..coeffs.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        coeffs[b]
            .abs()
            .partial_cmp(&coeffs[a].abs())
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut selected: Vec<usize> = order.into_iter().take(n_coeffs).collect();
    // Gaussian marks are assigned in ascending coefficient order.
    selected.sort_unstable();
    for idx in selected {
        let g: f64 = rng.sample(StandardNormal);
        coeffs[idx] *= 1.0 + alpha * g;
    }

    Ok(dct3_ortho(&coeffs).into_iter().map(saturate).collect())
}

/// Additive ±a chips on every non-DC DCT coefficient.
pub(super) fn ss_dct_add(samples: &[i16], a: f64, rng: &mut ChaCha8Rng) -> Vec<i16> {
    let x: Vec<f64> = samples.iter().map(|&s| f64::from(s)).collect();
    let mut coeffs = dct2_ortho(&x);
    for v in &mut coeffs[1..] {
        let chip = if next_bit(rng) == 1 { 1.0 } else { -1.0 };
        *v += a * chip;
    }
    dct3_ortho(&coeffs).into_iter().map(saturate).collect()
}

/// Additive time-domain chips: `s[m] = c[m] + round(α·p[m])`, `p ∈ {−1,+1}`.
pub(super) fn ss_time_add(samples: &[i16], alpha: f64, rng: &mut ChaCha8Rng) -> Vec<i16> {
    samples
        .iter()
        .map(|&s| {
            let chip = if next_bit(rng) == 1 { 1.0 } else { -1.0 };
            saturate(f64::from(s) + (alpha * chip).round())
        })
        .collect()
}
