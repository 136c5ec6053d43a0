//! One-level integer Haar lifting and in-band LSB embedding.

use rand_chacha::ChaCha8Rng;

use super::{choose_positions, next_bit, EmbedError};

/// Forward integer Haar (S-transform) step over sample pairs:
/// `d[n] = x[2n+1] − x[2n]`, `a[n] = x[2n] + ⌊d[n]/2⌋`.
///
/// A trailing odd sample is not transformed. Exactly invertible via
/// [`haar_inverse`] for any 16-bit input.
pub fn haar_forward(x: &[i16]) -> (Vec<i32>, Vec<i32>) {
    let pairs = x.len() / 2;
    let mut approx = Vec::with_capacity(pairs);
    let mut detail = Vec::with_capacity(pairs);
    for n in 0..pairs {
        let x0 = i32::from(x[2 * n]);
        let x1 = i32::from(x[2 * n + 1]);
        let d = x1 - x0;
        approx.push(x0 + d.div_euclid(2));
        detail.push(d);
    }
    (approx, detail)
}

/// Inverse of [`haar_forward`]: `x[2n] = a[n] − ⌊d[n]/2⌋`, `x[2n+1] = x[2n] + d[n]`.
pub fn haar_inverse(approx: &[i32], detail: &[i32]) -> Vec<i32> {
    assert_eq!(approx.len(), detail.len());
    let mut out = Vec::with_capacity(approx.len() * 2);
    for (&a, &d) in approx.iter().zip(detail) {
        let x0 = a - d.div_euclid(2);
        out.push(x0);
        out.push(x0 + d);
    }
    out
}

/// Write message bits into the `planes` lowest bit-planes of a seeded
/// rate-controlled subset of detail coefficients, then invert the lifting.
pub(super) fn int_wavelet_embed(
    samples: &[i16],
    planes: u8,
    capacity_bps: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<i16>, EmbedError> {
    if samples.len() < 2 {
        return Err(EmbedError::TooShort {
            needed: 2,
            got: samples.len(),
        });
    }
    let n = samples.len();
    let pairs = n / 2;
    let n_coeffs = (capacity_bps * n as f64 / f64::from(planes)).floor() as usize;
    if n_coeffs > pairs {
        return Err(EmbedError::CapacityExceeded(format!(
            "{n_coeffs} detail coefficients needed, only {pairs} available"
        )));
    }
    if n_coeffs == 0 {
        return Ok(samples.to_vec());
    }

    let (approx, mut detail) = haar_forward(samples);
    let mask: i32 = (1 << planes) - 1;
    for pos in choose_positions(pairs, n_coeffs, rng) {
        let mut bits: i32 = 0;
        for p in 0..planes {
            bits |= i32::from(next_bit(rng)) << p;
        }
        detail[pos] = (detail[pos] & !mask) | bits;
    }

    let rebuilt = haar_inverse(&approx, &detail);
    let mut out = samples.to_vec();
    for (o, v) in out.iter_mut().zip(rebuilt) {
        *o = v.clamp(i32::from(i16::MIN), i32::from(i16::MAX)) as i16;
    }
    Ok(out)
}
