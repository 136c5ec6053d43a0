//! Independent numerical oracles shared by the integration suites.
//!
//! Everything here is deliberately brute-force and separate from the
//! library's implementation paths: direct O(n²) transforms, a Lentz
//! continued-fraction incomplete beta, and textbook moment formulas.

/// O(n²) one-sided DFT power oracle.
pub fn dft_power_oracle(frame: &[f64], nfft: usize) -> Vec<f64> {
    (0..=nfft / 2)
        .map(|k| {
            let mut re = 0.0;
            let mut im = 0.0;
            for (m, &v) in frame.iter().enumerate() {
                let phase = -2.0 * std::f64::consts::PI * (k * m) as f64 / nfft as f64;
                re += v * phase.cos();
                im += v * phase.sin();
            }
            re * re + im * im
        })
        .collect()
}

/// O(n²) orthonormal DCT-II oracle.
pub fn dct2_oracle(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            let s = if k == 0 {
                (1.0 / n as f64).sqrt()
            } else {
                (2.0 / n as f64).sqrt()
            };
            s * x
                .iter()
                .enumerate()
                .map(|(m, &v)| {
                    v * (std::f64::consts::PI * k as f64 * (2 * m + 1) as f64 / (2.0 * n as f64))
                        .cos()
                })
                .sum::<f64>()
        })
        .collect()
}

/// O(n²) orthonormal DCT-III (inverse of [`dct2_oracle`]) oracle.
pub fn dct3_oracle(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    (0..n)
        .map(|m| {
            c.iter()
                .enumerate()
                .map(|(k, &v)| {
                    let s = if k == 0 {
                        (1.0 / n as f64).sqrt()
                    } else {
                        (2.0 / n as f64).sqrt()
                    };
                    s * v
                        * (std::f64::consts::PI * k as f64 * (2 * m + 1) as f64
                            / (2.0 * n as f64))
                            .cos()
                })
                .sum()
        })
        .collect()
}

/// Population moments straight from their defining formulas.
pub fn moments_oracle(v: &[f64]) -> (f64, f64, f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let m2 = v.iter().map(|&x| (x - mean).powi(2)).sum::<f64>() / n;
    let sd = m2.sqrt();
    if sd == 0.0 {
        return (mean, 0.0, 0.0, 0.0);
    }
    let skew = v
        .iter()
        .map(|&x| ((x - mean) / sd).powi(3))
        .sum::<f64>()
        / n;
    let m4 = v.iter().map(|&x| (x - mean).powi(4)).sum::<f64>() / n;
    (mean, sd, skew, m4 / (m2 * m2))
}

/// Regularized incomplete beta via Lentz's continued fraction.
pub fn inc_beta_oracle(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front =
        ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_cf(a, b, x) / a
    } else {
        1.0 - ln_front.exp() * beta_cf(b, a, 1.0 - x) / b
    }
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..300 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-15 {
            break;
        }
    }
    h
}

#[allow(clippy::excessive_precision)] // canonical Lanczos(g=7) table values
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        pi.ln() - (pi * x).sin().ln() - ln_gamma(1.0 - x)
    } else {
        let x = x - 1.0;
        let mut acc = COEFFS[0];
        for (i, &c) in COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + 7.5;
        0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
    }
}
