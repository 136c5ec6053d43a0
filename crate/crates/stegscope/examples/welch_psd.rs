//! Welch power spectral densities of a cover and of its steganography
//! noise: the cover is band-limited, the noise is flat wideband.
//!
//!     cargo run --release --example welch_psd

use stegscope::analysis::steg_noise;
use stegscope::corpus::{synth_clip, SynthConfig};
use stegscope::dsp::psd_welch;
use stegscope::embed::{embed, EmbedderSpec};

fn main() {
    let cover = synth_clip(
        &SynthConfig {
            duration_secs: 3.0,
            seed: 33,
            ..SynthConfig::default()
        },
        0,
    );
    let stego = embed(&cover, &EmbedderSpec::lsb_match(0.12, 8)).expect("embed");
    let noise: Vec<f64> = steg_noise(&cover, &stego)
        .expect("noise")
        .into_iter()
        .map(f64::from)
        .collect();

    let cover_psd = psd_welch(&cover.samples_f64(), 1024, 512, cover.sample_rate).expect("psd");
    let noise_psd = psd_welch(&noise, 1024, 512, cover.sample_rate).expect("psd");

    println!("Welch PSD, 1024-sample Hann segments, 512 hop; values in dB\n");
    println!("{:>9} | {:>10} {:>10}", "freq Hz", "cover", "noise");
    let bins = cover_psd.bins.len();
    for k in (0..bins).step_by(bins / 24) {
        let db = |p: f64| 10.0 * p.max(1e-12).log10();
        println!(
            "{:>9.0} | {:>10.2} {:>10.2}",
            cover_psd.bin_hz(k),
            db(cover_psd.bins[k]),
            db(noise_psd.bins[k]),
        );
    }

    let cover_hi: f64 = cover_psd.bins[bins * 3 / 4..].iter().sum();
    let cover_lo: f64 = cover_psd.bins[..bins / 4].iter().sum();
    let noise_hi: f64 = noise_psd.bins[bins * 3 / 4..].iter().sum();
    let noise_lo: f64 = noise_psd.bins[..bins / 4].iter().sum();
    println!(
        "\ntop-quartile / bottom-quartile power: cover {:.2e}, noise {:.2}",
        cover_hi / cover_lo,
        noise_hi / noise_lo
    );
    println!("the noise floor is flat, so high bands are where it shows.");
}
