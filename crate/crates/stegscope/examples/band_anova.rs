//! Which frequency bands betray hidden data? ANOVA F-scores of 50 equal
//! sub-band energies, computed on second-derivative frames of covers versus
//! half-rate ±1 matched stegos.
//!
//!     cargo run --release --example band_anova

use rayon::prelude::*;
use stegscope::audio_io::segment;
use stegscope::corpus::{synth_corpus, SynthConfig};
use stegscope::dsp::{band_energies, second_derivative};
use stegscope::embed::{embed, EmbedderSpec};
use stegscope::ml::anova_f;

fn main() {
    let cfg = SynthConfig {
        n_clips: 10,
        duration_secs: 3.0,
        seed: 99,
        ..SynthConfig::default()
    };
    let covers = synth_corpus(&cfg);
    let stegos: Vec<_> = covers
        .par_iter()
        .enumerate()
        .map(|(i, c)| embed(c, &EmbedderSpec::lsb_match(0.5, 300 + i as u64)).expect("embed"))
        .collect();

    let l = 50;
    let band_rows = |clips: &[stegscope::AudioClip]| -> Vec<Vec<f64>> {
        clips
            .par_iter()
            .flat_map_iter(|c| {
                let d2 = second_derivative(&c.samples_f64()).expect("derivative");
                let frames = segment(&d2, 1024, 512).expect("frames");
                frames
                    .frames()
                    .iter()
                    .map(|f| band_energies(f, l))
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let cover_rows = band_rows(&covers);
    let stego_rows = band_rows(&stegos);
    println!(
        "{} cover frames vs {} stego frames, {l} bands\n",
        cover_rows.len(),
        stego_rows.len()
    );

    println!("{:>4} {:>12}  F-score (log bar)", "band", "F");
    for j in 0..l {
        let a: Vec<f64> = cover_rows.iter().map(|r| r[j]).collect();
        let b: Vec<f64> = stego_rows.iter().map(|r| r[j]).collect();
        let (f, _) = anova_f(&a, &b).expect("anova");
        let bar = "#".repeat(((1.0 + f).log10() * 12.0).round().max(0.0) as usize);
        println!("{:>4} {f:>12.2}  {bar}", j + 1);
    }
    println!("\nhigh bands dominate: the embedding noise is flat while the");
    println!("cover spectrum falls off, so the evidence piles up near Nyquist.");
}
