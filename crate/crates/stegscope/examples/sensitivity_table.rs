//! Reproduce the per-plane bit-sensitivity table over a synthetic corpus:
//! each row is one data-hiding method, each column the sensitivity
//! S_i = 2·BER of bit-plane i (plane 1 = LSB), in percent.
//!
//!     cargo run --release --example sensitivity_table

use stegscope::analysis::sensitivity_report;
use stegscope::corpus::{synth_corpus, SynthConfig};
use stegscope::embed::EmbedderSpec;

fn main() {
    let cfg = SynthConfig {
        n_clips: 12,
        duration_secs: 3.0,
        seed: 13,
        ..SynthConfig::loud()
    };
    println!(
        "synthesizing {} covers ({} s @ {} Hz, seed {})...\n",
        cfg.n_clips, cfg.duration_secs, cfg.sample_rate, cfg.seed
    );
    let covers = synth_corpus(&cfg);
    let n = covers[0].len();

    let rows: Vec<(&str, &str, EmbedderSpec)> = vec![
        ("lsb_replace", "C=4", EmbedderSpec::lsb_replace(4, 4.0, 1)),
        ("lsb_replace", "C=2", EmbedderSpec::lsb_replace(2, 2.0, 1)),
        ("lsb_replace", "C=1", EmbedderSpec::lsb_replace(1, 1.0, 1)),
        ("lsb_match", "C=0.5", EmbedderSpec::lsb_match(0.5, 1)),
        ("lsb_match", "C=0.25", EmbedderSpec::lsb_match(0.25, 1)),
        ("lsb_match", "C=0.12", EmbedderSpec::lsb_match(0.12, 1)),
        ("lsb_match", "C=0.06", EmbedderSpec::lsb_match(0.06, 1)),
        ("int_wavelet", "C=1 b=2", EmbedderSpec::int_wavelet(2, 1.0, 1)),
        ("int_wavelet", "C=0.5", EmbedderSpec::int_wavelet(1, 0.5, 1)),
        ("int_wavelet", "C=0.25", EmbedderSpec::int_wavelet(1, 0.25, 1)),
        ("cox_dct", "a=0.01", EmbedderSpec::cox_dct(0.01, 1000.min(n / 10), 1)),
        ("ss_dct_add", "a=10", EmbedderSpec::ss_dct_add(10.0, 1)),
        ("ss_dct_add", "a=20", EmbedderSpec::ss_dct_add(20.0, 1)),
        ("ss_time_add", "a=1", EmbedderSpec::ss_time_add(1.0, 1)),
    ];

    println!(
        "{:<13} {:<8} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}",
        "method", "param", "S1", "S2", "S3", "S4", "S5", "S6"
    );
    for (name, param, spec) in rows {
        let report = sensitivity_report(&covers, &spec, 6).expect("sensitivity report");
        let cells: Vec<String> = report
            .sensitivity
            .iter()
            .map(|s| format!("{:7.1}", 100.0 * s))
            .collect();
        println!("{name:<13} {param:<8} {}", cells.join(" "));
    }
    println!("\nvalues are percentages; 100 = plane fully randomized, 0 = untouched.");
    println!("note how plane 1 is the most sensitive plane for every method.");
    println!("(ss_time_add at a=1 flips every LSB deterministically: S1 = 200");
    println!("marks perfect anti-correlation rather than mere randomization.)");
}
