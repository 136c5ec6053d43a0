//! One-way two-group ANOVA F-test.

use statrs::function::beta::beta_reg;

use super::MlError;

/// F-score and p-value of a two-group one-way ANOVA (df1 = 1, df2 = n − 2).
///
/// The p-value is the F-distribution survival function computed directly
/// through the regularized incomplete beta function, so tiny tail
/// probabilities keep full relative precision. Zero within-group variance
/// with a real group separation reports the `(+∞, 0)` sentinel instead of
/// an error; identical degenerate groups report `(0, 1)`.
pub fn anova_f(a: &[f64], b: &[f64]) -> Result<(f64, f64), MlError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(MlError::TooFewSamples(format!(
            "groups of {} and {} (need ≥ 2 each)",
            a.len(),
            b.len()
        )));
    }
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let n = n1 + n2;
    let mean_a = a.iter().sum::<f64>() / n1;
    let mean_b = b.iter().sum::<f64>() / n2;
    let grand = (n1 * mean_a + n2 * mean_b) / n;

    let ssb = n1 * (mean_a - grand).powi(2) + n2 * (mean_b - grand).powi(2);
    let ssw = a.iter().map(|&x| (x - mean_a).powi(2)).sum::<f64>()
        + b.iter().map(|&x| (x - mean_b).powi(2)).sum::<f64>();

    let df2 = n - 2.0;
    let msb = ssb; // df1 = 1
    let msw = ssw / df2;

    if msw <= 0.0 {
        return Ok(if msb <= 0.0 { (0.0, 1.0) } else { (f64::INFINITY, 0.0) });
    }
    let f = msb / msw;
    let p = f_survival(f, 1.0, df2);
    Ok((f, p))
}

/// `P(F > f)` for the F(df1, df2) distribution:
/// `I_{df2/(df2 + df1·f)}(df2/2, df1/2)`.
pub(crate) fn f_survival(f: f64, df1: f64, df2: f64) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    beta_reg(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f))
}
