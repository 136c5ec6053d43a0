//! Compare Mel and reversed-Mel triangular filter banks at 44.1 kHz:
//! the Mel bank gets wider toward high frequencies, the reversed-Mel bank
//! gets narrower — concentrating resolution where embedding noise lives.
//!
//!     cargo run --release --example filterbank_shapes

use stegscope::dsp::{build_filterbank, ScaleKind};

fn main() {
    let (m, fs, nfft) = (29, 44_100, 1024);
    let mel = build_filterbank(m, fs, nfft, ScaleKind::Mel).expect("mel bank");
    let rmel = build_filterbank(m, fs, nfft, ScaleKind::RMel).expect("rmel bank");

    println!("M = {m} filters, fs = {fs} Hz, nfft = {nfft}\n");
    println!(
        "{:>6} | {:>9} {:>9} {:>8} | {:>9} {:>9} {:>8}",
        "filter", "mel lo", "mel hi", "width", "rmel lo", "rmel hi", "width"
    );
    for k in 1..=m {
        let (ml, mh) = mel.support_hz(k);
        let (rl, rh) = rmel.support_hz(k);
        println!(
            "{k:>6} | {ml:>9.1} {mh:>9.1} {:>8.1} | {rl:>9.1} {rh:>9.1} {:>8.1}",
            mh - ml,
            rh - rl
        );
    }

    let (ml, mh) = mel.support_hz(29);
    let (rl, rh) = rmel.support_hz(29);
    println!("\ntop filter supports:");
    println!("  mel   filter 29: [{ml:.0}, {mh:.0}] Hz — a {:.0} Hz wide triangle", mh - ml);
    println!("  r-mel filter 29: [{rl:.0}, {rh:.0}] Hz — only {:.0} Hz wide", rh - rl);
    println!(
        "\nthe reversed scale gives the top octave {:.1}x finer resolution,",
        (mh - ml) / (rh - rl)
    );
    println!("exactly where wideband steganography noise is easiest to see.");
}
