//! The calibration idea in one picture: re-embedding changes a pristine
//! cover a lot and an already-embedded signal much less. Extract the 116
//! calibrated features for a cover and its stego twin and compare the
//! per-channel mean differences.
//!
//!     cargo run --release --example calibrated_features

use stegscope::corpus::{synth_clip, SynthConfig};
use stegscope::embed::{embed, EmbedderSpec};
use stegscope::features::{extract_features, CalibrationSpec};

fn main() {
    let cover = synth_clip(
        &SynthConfig {
            duration_secs: 3.0,
            seed: 21,
            ..SynthConfig::default()
        },
        0,
    );
    let stego = embed(&cover, &EmbedderSpec::lsb_replace(1, 1.0, 5)).expect("embed");

    let calib = CalibrationSpec::universal();
    let f_cover = extract_features(&cover, &calib, 29).expect("cover features");
    let f_stego = extract_features(&stego, &calib, 29).expect("stego features");
    println!(
        "extracted {} features per clip (29 reversed-Mel channels x 4 moments)\n",
        f_cover.values.len()
    );

    // μ of channel k sits at index 4(k−1); σ, s, κ follow.
    println!(
        "{:>7} | {:>9} {:>9} | {:>9} {:>9}",
        "channel", "cover µ", "stego µ", "cover σ", "stego σ"
    );
    for k in (0..29).step_by(4) {
        println!(
            "{:>7} | {:>9.4} {:>9.4} | {:>9.4} {:>9.4}",
            k + 1,
            f_cover.values[4 * k],
            f_stego.values[4 * k],
            f_cover.values[4 * k + 1],
            f_stego.values[4 * k + 1],
        );
    }

    let mean_abs = |v: &[f64]| v.iter().step_by(4).map(|x| x.abs()).sum::<f64>() / 29.0;
    println!("\nmean |µ| over channels: cover {:.4}, stego {:.4}", mean_abs(&f_cover.values), mean_abs(&f_stego.values));
    println!("re-embedding barely moves the stego (it is already 'saturated'),");
    println!("while the cover shifts visibly — that asymmetry is the detector's signal.");
}
