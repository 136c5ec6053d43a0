//! Detector-side machinery: normalization, SMO-based SVM, stratified
//! cross-validation, GA feature selection, ANOVA F-tests.

mod anova;
mod cv;
mod ga;
mod svm;

pub use anova::anova_f;
pub use cv::{kfold_cv, stratified_folds, CvReport, FoldMetrics};
pub use ga::{ga_select, GaConfig, GaSelection};
pub use svm::{svm_predict, svm_train, Kernel, KernelChoice, SvmModel, SvmParams};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Label;

#[derive(Debug, Error)]
pub enum MlError {
    #[error("empty input")]
    Empty,
    #[error("training data contains a single class")]
    SingleClass,
    #[error("solver did not converge within {0} passes")]
    NotConverged(usize),
    #[error("too few samples: {0}")]
    TooFewSamples(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("non-finite value in column {0}")]
    NonFinite(usize),
}

/// Labeled feature matrix with clip identifiers.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<Label>,
    pub ids: Vec<String>,
}

impl Dataset {
    pub fn new(x: Vec<Vec<f64>>, y: Vec<Label>, ids: Vec<String>) -> Result<Self, MlError> {
        if x.is_empty() {
            return Err(MlError::Empty);
        }
        if x.len() != y.len() || x.len() != ids.len() {
            return Err(MlError::DimMismatch(format!(
                "{} rows, {} labels, {} ids",
                x.len(),
                y.len(),
                ids.len()
            )));
        }
        let d = x[0].len();
        for row in &x {
            if row.len() != d {
                return Err(MlError::DimMismatch(format!(
                    "ragged rows: {} vs {}",
                    row.len(),
                    d
                )));
            }
            if let Some(col) = row.iter().position(|v| !v.is_finite()) {
                return Err(MlError::NonFinite(col));
            }
        }
        Ok(Dataset { x, y, ids })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn d(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    /// Rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            x: indices.iter().map(|&i| self.x[i].clone()).collect(),
            y: indices.iter().map(|&i| self.y[i]).collect(),
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
        }
    }

    /// Columns where `mask` is true.
    pub fn masked(&self, mask: &[bool]) -> Dataset {
        Dataset {
            x: self.x.iter().map(|row| apply_mask(row, mask)).collect(),
            y: self.y.clone(),
            ids: self.ids.clone(),
        }
    }
}

pub(crate) fn apply_mask(row: &[f64], mask: &[bool]) -> Vec<f64> {
    row.iter()
        .zip(mask)
        .filter_map(|(&v, &keep)| keep.then_some(v))
        .collect()
}

/// Column-wise train-set statistics for standardization (population forms).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormStats {
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
}

/// Fit per-column mean and population standard deviation.
pub fn fit_norm(x: &[Vec<f64>]) -> Result<NormStats, MlError> {
    if x.is_empty() {
        return Err(MlError::Empty);
    }
    let n = x.len() as f64;
    let d = x[0].len();
    let mut mean = vec![0.0; d];
    for row in x {
        for (m, &v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    let mut sd = vec![0.0; d];
    for row in x {
        for ((s, &v), &m) in sd.iter_mut().zip(row).zip(&mean) {
            *s += (v - m).powi(2);
        }
    }
    for s in &mut sd {
        *s = (*s / n).sqrt();
    }
    Ok(NormStats { mean, sd })
}

/// Standardize rows with precomputed stats; zero-variance columns map to 0.
pub fn apply_norm(x: &[Vec<f64>], stats: &NormStats) -> Vec<Vec<f64>> {
    x.iter().map(|row| normalize_row(row, stats)).collect()
}

pub(crate) fn normalize_row(row: &[f64], stats: &NormStats) -> Vec<f64> {
    row.iter()
        .zip(stats.mean.iter().zip(&stats.sd))
        .map(|(&v, (&m, &s))| if s > 0.0 { (v - m) / s } else { 0.0 })
        .collect()
}
