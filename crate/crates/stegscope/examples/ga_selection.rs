//! Genetic-algorithm feature selection on detector features: evolve a
//! feature mask by inner-CV accuracy and watch the fitness trace climb.
//!
//!     cargo run --release --example ga_selection

use rayon::prelude::*;
use stegscope::corpus::{synth_corpus, SynthConfig};
use stegscope::embed::{embed, EmbedderSpec};
use stegscope::features::{extract_features, CalibrationSpec};
use stegscope::ml::{ga_select, GaConfig, Dataset, SvmParams};
use stegscope::Label;

fn main() {
    let cfg = SynthConfig {
        n_clips: 24,
        duration_secs: 2.0,
        seed: 55,
        ..SynthConfig::default()
    };
    println!("building a small labeled feature set ({} clips per class)...", cfg.n_clips);
    let covers = synth_corpus(&cfg);
    let stegos: Vec<_> = covers
        .par_iter()
        .enumerate()
        .map(|(i, c)| embed(c, &EmbedderSpec::lsb_match(0.25, 70 + i as u64)).expect("embed"))
        .collect();
    let calib = CalibrationSpec::universal();
    // A compact 12-channel bank keeps the search space readable.
    let m = 12;
    let mut x: Vec<Vec<f64>> = covers
        .par_iter()
        .map(|c| extract_features(c, &calib, m).expect("features").values)
        .collect();
    let mut y = vec![Label::Cover; covers.len()];
    x.extend(
        stegos
            .par_iter()
            .map(|c| extract_features(c, &calib, m).expect("features").values)
            .collect::<Vec<_>>(),
    );
    y.extend(vec![Label::Stego; stegos.len()]);
    let ids = (0..x.len()).map(|i| format!("clip{i:02}")).collect();
    let ds = Dataset::new(x, y, ids).expect("dataset");

    let ga = GaConfig {
        population: 24,
        generations: 12,
        seed: 7,
        ..GaConfig::default()
    };
    println!(
        "searching {}-bit masks: population {}, {} generations, two-point crossover\n",
        ds.d(),
        ga.population,
        ga.generations
    );
    let sel = ga_select(&ds, &ga, &SvmParams::default()).expect("ga");

    println!("fitness trace (best per generation):");
    for (generation, fitness) in sel.fitness_trace.iter().enumerate() {
        let bar = "#".repeat((fitness * 40.0).round() as usize);
        println!("  gen {generation:>2}: {fitness:.3} {bar}");
    }
    let kept = sel.mask.iter().filter(|&&b| b).count();
    println!("\nbest mask keeps {kept}/{} features (fitness {:.3})", sel.mask.len(), sel.best_fitness);
    let kept_list: Vec<String> = sel
        .mask
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| {
            let channel = i / 4 + 1;
            let moment = ["µ", "σ", "s", "k"][i % 4];
            format!("ch{channel}{moment}")
        })
        .collect();
    println!("kept: {}", kept_list.join(" "));
}
