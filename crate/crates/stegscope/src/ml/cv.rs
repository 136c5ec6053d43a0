//! Stratified k-fold cross-validation with sensitivity/specificity.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{svm_predict, svm_train, Dataset, MlError, SvmParams};
use crate::Label;

/// Detector metrics over one evaluation set.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FoldMetrics {
    /// True-positive rate on stego.
    pub se: f64,
    /// True-negative rate on cover.
    pub sp: f64,
    pub accuracy: f64,
}

/// Per-fold, mean and pooled metrics of one cross-validation run.
#[derive(Debug, Clone, Serialize)]
pub struct CvReport {
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<FoldMetrics>,
    pub mean: FoldMetrics,
    pub pooled: FoldMetrics,
}

#[derive(Default, Clone, Copy)]
struct Confusion {
    tp: usize,
    tn: usize,
    fp: usize,
    fn_: usize,
}

impl Confusion {
    fn record(&mut self, want: Label, got: Label) {
        match (want, got) {
            (Label::Stego, Label::Stego) => self.tp += 1,
            (Label::Stego, Label::Cover) => self.fn_ += 1,
            (Label::Cover, Label::Cover) => self.tn += 1,
            (Label::Cover, Label::Stego) => self.fp += 1,
        }
    }

    fn add(&mut self, other: &Confusion) {
        self.tp += other.tp;
        self.tn += other.tn;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }

    fn metrics(&self) -> FoldMetrics {
        let div = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        FoldMetrics {
            se: div(self.tp, self.tp + self.fn_),
            sp: div(self.tn, self.tn + self.fp),
            accuracy: div(self.tp + self.tn, self.tp + self.tn + self.fp + self.fn_),
        }
    }
}

/// Stratified fold assignment from a seeded per-class shuffle; fold sizes
/// differ by at most one per class.
pub fn stratified_folds(y: &[Label], k: usize, seed: u64) -> Result<Vec<Vec<usize>>, MlError> {
    assert!(k >= 2, "need at least two folds");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    for class in [Label::Cover, Label::Stego] {
        let mut idx: Vec<usize> = (0..y.len()).filter(|&i| y[i] == class).collect();
        if idx.len() < k {
            return Err(MlError::TooFewSamples(format!(
                "class {class} has {} samples for {k} folds",
                idx.len()
            )));
        }
        idx.shuffle(&mut rng);
        for (pos, i) in idx.into_iter().enumerate() {
            folds[pos % k].push(i);
        }
    }
    Ok(folds)
}

/// Stratified k-fold cross-validation. Normalization is fitted inside
/// `svm_train` on each fold's training portion only.
pub fn kfold_cv(
    ds: &Dataset,
    k: usize,
    params: &SvmParams,
    seed: u64,
) -> Result<CvReport, MlError> {
    let folds = stratified_folds(&ds.y, k, seed)?;
    let mut per_fold = Vec::with_capacity(k);
    let mut pooled = Confusion::default();
    for eval_idx in &folds {
        let train_idx: Vec<usize> = folds
            .iter()
            .filter(|f| !std::ptr::eq(*f, eval_idx))
            .flatten()
            .copied()
            .collect();
        let model = svm_train(&ds.subset(&train_idx), params)?;
        let mut conf = Confusion::default();
        for &i in eval_idx {
            let (got, _) = svm_predict(&model, &ds.x[i]);
            conf.record(ds.y[i], got);
        }
        pooled.add(&conf);
        per_fold.push(conf.metrics());
    }

    let n = per_fold.len() as f64;
    let mean = FoldMetrics {
        se: per_fold.iter().map(|m| m.se).sum::<f64>() / n,
        sp: per_fold.iter().map(|m| m.sp).sum::<f64>() / n,
        accuracy: per_fold.iter().map(|m| m.accuracy).sum::<f64>() / n,
    };
    Ok(CvReport {
        k,
        seed,
        folds: per_fold,
        mean,
        pooled: pooled.metrics(),
    })
}
