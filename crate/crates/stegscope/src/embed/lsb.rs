//! LSB-plane replacement and ±1 LSB matching.

use rand_chacha::ChaCha8Rng;

use super::{choose_positions, next_bit};

/// Replace bit-planes with message bits.
///
/// At `rate ≥ 1` the lowest `planes` bit-planes of every sample are
/// rewritten (bits consumed low plane first). Below 1 BPS a seeded subset of
/// `⌊rate·n⌋` samples has its LSB replaced.
pub(super) fn lsb_replace(samples: &[i16], planes: u8, rate: f64, rng: &mut ChaCha8Rng) -> Vec<i16> {
    let mut out = samples.to_vec();
    if rate == 0.0 {
        return out;
    }
    if rate >= 1.0 {
        let mask: u16 = (1u16 << planes) - 1;
        for s in &mut out {
            let mut bits: u16 = 0;
            for p in 0..planes {
                bits |= next_bit(rng) << p;
            }
            *s = ((*s as u16 & !mask) | bits) as i16;
        }
    } else {
        let k = (rate * samples.len() as f64).floor() as usize;
        for pos in choose_positions(samples.len(), k, rng) {
            let bit = next_bit(rng);
            out[pos] = ((out[pos] as u16 & !1) | bit) as i16;
        }
    }
    out
}

/// ±1 matching at capacity `c` bits per sample.
///
/// `⌊c·n⌋` seeded positions are inspected in ascending order; where the LSB
/// disagrees with the message bit the sample moves ±1 (uniform coin, with
/// the only legal direction forced at the 16-bit boundaries). The coin is
/// drawn lazily, only for unforced mismatches.
#[allow(clippy::if_same_then_else)] // the coin branch consumes PRNG state, the forced one must not
pub(super) fn lsb_match(samples: &[i16], c: f64, rng: &mut ChaCha8Rng) -> Vec<i16> {
    let mut out = samples.to_vec();
    let k = (c * samples.len() as f64).floor() as usize;
    for pos in choose_positions(samples.len(), k, rng) {
        let bit = next_bit(rng);
        let s = out[pos];
        if (s as u16 & 1) != bit {
            out[pos] = if s == i16::MAX {
                s - 1
            } else if s == i16::MIN {
                s + 1
            } else if next_bit(rng) == 1 {
                s + 1
            } else {
                s - 1
            };
        }
    }
    out
}
