//! End-to-end detection experiment: synthesize covers, embed half-rate ±1
//! LSB matching, extract calibrated features, and run stratified 10-fold
//! cross-validation with the RBF SVM.
//!
//!     cargo run --release --example detector_cv

use rayon::prelude::*;
use stegscope::corpus::{synth_corpus, SynthConfig};
use stegscope::embed::{embed, EmbedderSpec};
use stegscope::features::{extract_features, CalibrationSpec};
use stegscope::ml::{kfold_cv, Dataset, SvmParams};
use stegscope::Label;

fn main() {
    let cfg = SynthConfig {
        n_clips: 40,
        duration_secs: 3.0,
        seed: 404,
        ..SynthConfig::default()
    };
    println!("synthesizing {} covers and embedding lsb_match C=0.5...", cfg.n_clips);
    let covers = synth_corpus(&cfg);
    let stegos: Vec<_> = covers
        .par_iter()
        .enumerate()
        .map(|(i, c)| embed(c, &EmbedderSpec::lsb_match(0.5, 1000 + i as u64)).expect("embed"))
        .collect();

    println!("extracting calibrated features (universal re-embedding)...");
    let calib = CalibrationSpec::universal();
    let features = |clips: &[stegscope::AudioClip]| -> Vec<Vec<f64>> {
        clips
            .par_iter()
            .map(|c| extract_features(c, &calib, 29).expect("features").values)
            .collect()
    };
    let mut x = features(&covers);
    let mut y = vec![Label::Cover; covers.len()];
    x.extend(features(&stegos));
    y.extend(vec![Label::Stego; stegos.len()]);
    let ids = (0..x.len()).map(|i| format!("clip{i:03}")).collect();
    let ds = Dataset::new(x, y, ids).expect("dataset");

    println!("10-fold cross-validation (RBF, γ = 1/d, C = 10)...\n");
    let report = kfold_cv(&ds, 10, &SvmParams::default(), 2024).expect("cv");
    println!("{:<6} {:>8} {:>8} {:>8}", "fold", "Se", "Sp", "acc");
    for (i, fold) in report.folds.iter().enumerate() {
        println!(
            "{:<6} {:>8.3} {:>8.3} {:>8.3}",
            i + 1,
            fold.se,
            fold.sp,
            fold.accuracy
        );
    }
    println!(
        "{:<6} {:>8.3} {:>8.3} {:>8.3}",
        "mean", report.mean.se, report.mean.sp, report.mean.accuracy
    );
}
