//! Batch command layer: everything the `stegscope` binary does, callable as
//! library functions for tests and embedding.
//!
//! Every command is reproducible from (inputs, config, seeds); resolved
//! configuration can be dumped with `--print-config`. Exit codes: 0 success,
//! 2 validation error, 3 I/O error. Errors and per-clip warnings go to
//! stderr as JSON lines.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{noise_pmf, sensitivity_report, steg_noise};
use crate::audio_io::{downmix_mono, read_wav, write_wav, AudioClip, AudioError};
use crate::corpus::{CorpusError, CorpusManifest, ManifestRow, SynthConfig, synth_clip};
use crate::dsp::{psd_welch, ScaleKind};
use crate::embed::{embed, EmbedderKind, EmbedderSpec};
use crate::features::{
    extract_baseline, extract_features_cfg, BaselineKind, CalibrationMode, CalibrationSpec,
    ExtractorConfig, SpectrumMode,
};
use crate::ml::{
    anova_f, ga_select, kfold_cv, stratified_folds, svm_predict, svm_train, CvReport, Dataset,
    GaConfig, KernelChoice, SvmModel, SvmParams,
};
use crate::Label;

/// Command failure classified for the exit code.
#[derive(Debug, thiserror::Error)]
pub enum CmdError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Validation(_) => 2,
            CmdError::Io(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CmdError::Validation(_) => "validation",
            CmdError::Io(_) => "io",
        }
    }
}

impl From<AudioError> for CmdError {
    fn from(e: AudioError) -> Self {
        match e {
            AudioError::Io(io) => CmdError::Io(io.to_string()),
            other => CmdError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Io(e.to_string())
    }
}

impl From<CorpusError> for CmdError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Io(io) => CmdError::Io(io.to_string()),
            other => CmdError::Validation(other.to_string()),
        }
    }
}

macro_rules! validation_from {
    ($($ty:ty),*) => {$(
        impl From<$ty> for CmdError {
            fn from(e: $ty) -> Self {
                CmdError::Validation(e.to_string())
            }
        }
    )*};
}
validation_from!(
    crate::embed::EmbedError,
    crate::analysis::AnalysisError,
    crate::features::FeatureError,
    crate::ml::MlError,
    crate::dsp::DspError,
    serde_json::Error
);

fn warn_json(message: &str, clip_id: &str) {
    eprintln!(
        "{}",
        serde_json::json!({ "warning": message, "clip_id": clip_id })
    );
}

/// Which feature extractor a command uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExtractorKind {
    /// Calibrated reversed-Mel energy moments (the detector's features).
    Proposed,
    /// Mel cepstra of the raw signal.
    Mfcc,
    /// Mel cepstra of the second derivative.
    D2mfcc,
    /// Reversed-Mel cepstra of the raw signal.
    Rmfcc,
}

/// Fully resolved pipeline configuration. Defaults are the detector's
/// standard setup: 29 channels, 1024/512 framing, reversed-Mel scale,
/// power spectrum, universal calibration, RBF SVM with γ = 1/d and C = 10,
/// 10-fold cross-validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub channels: usize,
    pub frame_len: usize,
    pub hop: usize,
    pub scale: ScaleKind,
    pub spectrum: SpectrumMode,
    pub extractor: ExtractorKind,
    pub double_log: bool,
    pub calibration: CalibrationMode,
    /// Re-embedding algorithm for targeted calibration.
    pub reembedder: Option<EmbedderSpec>,
    /// Fixed calibration message seed (default: clip content hash).
    pub calib_seed: Option<u64>,
    pub kernel: KernelChoice,
    pub c: f64,
    pub folds: usize,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            channels: 29,
            frame_len: 1024,
            hop: 512,
            scale: ScaleKind::RMel,
            spectrum: SpectrumMode::Power,
            extractor: ExtractorKind::Proposed,
            double_log: false,
            calibration: CalibrationMode::Universal,
            reembedder: None,
            calib_seed: None,
            kernel: KernelChoice::Rbf { gamma: None },
            c: 10.0,
            folds: 10,
            seed: 42,
            jobs: 0,
        }
    }
}

impl RunConfig {
    fn extractor_config(&self) -> ExtractorConfig {
        ExtractorConfig {
            channels: self.channels,
            frame_len: self.frame_len,
            hop: self.hop,
            scale: self.scale,
            spectrum: self.spectrum,
        }
    }

    fn calibration_spec(&self) -> Result<CalibrationSpec, CmdError> {
        let spec = match self.calibration {
            CalibrationMode::Universal => CalibrationSpec::universal(),
            CalibrationMode::Targeted => {
                let reembedder = self.reembedder.clone().ok_or_else(|| {
                    CmdError::Validation(
                        "targeted calibration needs a `reembedder` spec".into(),
                    )
                })?;
                CalibrationSpec::targeted(reembedder)
            }
        };
        Ok(spec.with_seed_override(self.calib_seed))
    }

    fn svm_params(&self) -> SvmParams {
        SvmParams {
            kernel: self.kernel,
            c: self.c,
            seed: self.seed,
            ..SvmParams::default()
        }
    }
}

/// Flag-level overrides applied on top of `--config` file values.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigOverrides {
    /// Filter-bank channel count M.
    #[arg(long, global = true)]
    pub channels: Option<usize>,
    #[arg(long, global = true)]
    pub frame_len: Option<usize>,
    #[arg(long, global = true)]
    pub hop: Option<usize>,
    /// Filter-bank scale for the proposed extractor: mel | rmel.
    #[arg(long, global = true)]
    pub scale: Option<String>,
    /// Per-bin statistic: power | magnitude.
    #[arg(long, global = true)]
    pub spectrum: Option<String>,
    /// Feature extractor: proposed | mfcc | d2mfcc | rmfcc.
    #[arg(long, global = true, value_enum)]
    pub extractor: Option<ExtractorKind>,
    /// Literal double-log cepstrum reading for the baselines.
    #[arg(long, global = true)]
    pub double_log: bool,
    /// Calibration mode: universal | targeted.
    #[arg(long, global = true)]
    pub calibration: Option<String>,
    /// Targeted calibration embedder (inline JSON or @file).
    #[arg(long, global = true)]
    pub reembedder: Option<String>,
    /// Fixed calibration message seed (default: clip content hash).
    #[arg(long, global = true)]
    pub calib_seed: Option<u64>,
    /// SVM kernel: rbf | linear.
    #[arg(long, global = true)]
    pub kernel: Option<String>,
    /// RBF width γ (default 1/d).
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// SVM box constraint C.
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Cross-validation fold count.
    #[arg(long, global = true)]
    pub folds: Option<usize>,
}

/// `stegscope` — audio steganalysis workbench.
#[derive(Debug, Parser)]
#[command(name = "stegscope", version, about)]
pub struct Cli {
    /// Master seed for corpora, folds and searches.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for per-clip work (0 = all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// JSON config file; flags override file values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Dump the fully resolved configuration to stdout before running.
    #[arg(long, global = true)]
    pub print_config: bool,
    #[command(flatten)]
    pub overrides: ConfigOverrides,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate seeded synthetic cover WAVs plus a manifest.
    GenSynthetic(GenSyntheticArgs),
    /// Embed a grid of algorithms over a cover directory.
    GenCorpus(GenCorpusArgs),
    /// Per-plane sensitivity report for one embedder over covers.
    Sense(SenseArgs),
    /// Extract a feature matrix CSV from a manifest.
    Features(FeaturesArgs),
    /// Train an SVM detector from a feature CSV.
    Train(TrainArgs),
    /// Cross-validated evaluation of a feature CSV.
    Cv(CvArgs),
    /// Genetic-algorithm feature selection on a feature CSV.
    Ga(GaArgs),
    /// Score WAV files with a trained model.
    Scan(ScanArgs),
    /// Steganography-noise PMF of one embedder on one cover.
    NoisePmf(NoisePmfArgs),
    /// Welch power spectral density of a WAV file.
    Psd(PsdArgs),
}

#[derive(Debug, Args)]
pub struct GenSyntheticArgs {
    /// Output directory for WAVs and `covers.csv`.
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 16)]
    pub clips: usize,
    #[arg(long, default_value_t = 5.0)]
    pub duration: f64,
    #[arg(long, default_value_t = 44_100)]
    pub rate: u32,
    /// Cover profile: bandlimited (quiet, low content) or tonal (loud).
    #[arg(long, default_value = "bandlimited")]
    pub profile: String,
}

#[derive(Debug, Args)]
pub struct GenCorpusArgs {
    /// Directory containing cover WAVs.
    pub cover_dir: PathBuf,
    /// JSON array of embedder specs (inline or @file).
    pub grid: String,
    /// Output directory for stego WAVs and `manifest.csv`.
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct SenseArgs {
    /// Cover directory or manifest CSV (cover rows are used).
    pub input: PathBuf,
    /// Embedder spec (inline JSON or @file).
    pub spec: String,
    #[arg(long, default_value_t = 6)]
    pub planes: u8,
    /// Report CSV path (JSON written beside it).
    #[arg(long, default_value = "sense_report.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    /// Corpus manifest CSV.
    pub manifest: PathBuf,
    /// Output feature CSV.
    #[arg(long, default_value = "features.csv")]
    pub out: PathBuf,
    /// Also export the N most discriminative feature columns (ANOVA-ranked)
    /// to `<out stem>_topN.csv`.
    #[arg(long)]
    pub export_top: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Feature CSV produced by `features`.
    pub features: PathBuf,
    /// Output model JSON.
    #[arg(long, default_value = "model.json")]
    pub out: PathBuf,
    /// Feature mask JSON from `ga` (field `mask`).
    #[arg(long)]
    pub mask: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    /// Feature CSV produced by `features`.
    pub features: PathBuf,
    /// Report base path; writes `<out>.json` and `<out>.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run GA feature selection as part of the evaluation.
    #[arg(long)]
    pub ga: bool,
    /// Where selection runs: per-fold (on each training portion) or global.
    #[arg(long, default_value = "per-fold")]
    pub ga_scope: String,
    #[arg(long, default_value_t = 40)]
    pub ga_population: usize,
    #[arg(long, default_value_t = 10)]
    pub ga_generations: usize,
}

#[derive(Debug, Args)]
pub struct GaArgs {
    /// Feature CSV produced by `features`.
    pub features: PathBuf,
    /// Output JSON with mask and fitness trace.
    #[arg(long, default_value = "ga_mask.json")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub population: usize,
    #[arg(long, default_value_t = 50)]
    pub generations: usize,
    #[arg(long, default_value_t = 0.01)]
    pub mutation_rate: f64,
    #[arg(long, default_value_t = 2)]
    pub elitism: usize,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Trained model JSON.
    pub model: PathBuf,
    /// WAV files to score.
    #[arg(required = true)]
    pub wavs: Vec<PathBuf>,
    /// Optional JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NoisePmfArgs {
    /// Cover WAV.
    pub cover: PathBuf,
    /// Embedder spec (inline JSON or @file).
    pub spec: String,
    #[arg(long, default_value = "noise_pmf.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PsdArgs {
    /// Input WAV.
    pub wav: PathBuf,
    #[arg(long, default_value_t = 1024)]
    pub seg_len: usize,
    #[arg(long, default_value_t = 512)]
    pub hop: usize,
    #[arg(long, default_value = "psd.csv")]
    pub out: PathBuf,
}

/// Parse, run, and convert the outcome into a process exit code.
pub fn run(cli: Cli) -> i32 {
    match try_run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::json!({ "error": e.to_string(), "kind": e.kind() })
            );
            e.exit_code()
        }
    }
}

fn try_run(cli: Cli) -> Result<(), CmdError> {
    let cfg = resolve_config(&cli)?;
    if cli.print_config {
        println!("{}", serde_json::to_string_pretty(&cfg).map_err(CmdError::from)?);
    }
    if cfg.jobs > 0 {
        // Ignore "already initialized": only possible in-process (tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build_global();
    }
    match &cli.command {
        Command::GenSynthetic(args) => cmd_gen_synthetic(&cfg, args),
        Command::GenCorpus(args) => cmd_gen_corpus(&cfg, args),
        Command::Sense(args) => cmd_sense(&cfg, args),
        Command::Features(args) => cmd_features(&cfg, args),
        Command::Train(args) => cmd_train(&cfg, args),
        Command::Cv(args) => cmd_cv(&cfg, args),
        Command::Ga(args) => cmd_ga(&cfg, args),
        Command::Scan(args) => cmd_scan(&cfg, args),
        Command::NoisePmf(args) => cmd_noise_pmf(&cfg, args),
        Command::Psd(args) => cmd_psd(&cfg, args),
    }
}

/// Defaults ← config file ← command-line flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CmdError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text)
                .map_err(|e| CmdError::Validation(format!("config file: {e}")))?
        }
        None => RunConfig::default(),
    };
    let o = &cli.overrides;
    if let Some(v) = o.channels {
        cfg.channels = v;
    }
    if let Some(v) = o.frame_len {
        cfg.frame_len = v;
    }
    if let Some(v) = o.hop {
        cfg.hop = v;
    }
    if let Some(s) = &o.scale {
        cfg.scale = parse_variant(s)?;
    }
    if let Some(s) = &o.spectrum {
        cfg.spectrum = parse_variant(s)?;
    }
    if let Some(v) = o.extractor {
        cfg.extractor = v;
    }
    if o.double_log {
        cfg.double_log = true;
    }
    if let Some(s) = &o.calibration {
        cfg.calibration = parse_variant(s)?;
    }
    if let Some(s) = &o.reembedder {
        cfg.reembedder = Some(parse_spec_arg(s)?);
    }
    if let Some(v) = o.calib_seed {
        cfg.calib_seed = Some(v);
    }
    if let Some(s) = &o.kernel {
        cfg.kernel = match s.to_ascii_lowercase().as_str() {
            "linear" => KernelChoice::Linear,
            "rbf" => KernelChoice::Rbf { gamma: o.gamma },
            other => {
                return Err(CmdError::Validation(format!("unknown kernel `{other}`")));
            }
        };
    } else if let Some(g) = o.gamma {
        cfg.kernel = KernelChoice::Rbf { gamma: Some(g) };
    }
    if let Some(v) = o.c {
        cfg.c = v;
    }
    if let Some(v) = o.folds {
        cfg.folds = v;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.jobs {
        cfg.jobs = v;
    }
    if cfg.frame_len == 0 || !cfg.frame_len.is_power_of_two() {
        return Err(CmdError::Validation(format!(
            "frame_len {} must be a power of two",
            cfg.frame_len
        )));
    }
    if cfg.hop == 0 || cfg.hop > cfg.frame_len {
        return Err(CmdError::Validation(format!(
            "hop {} must be in 1..=frame_len",
            cfg.hop
        )));
    }
    if cfg.channels == 0 {
        return Err(CmdError::Validation("channels must be at least 1".into()));
    }
    if cfg.folds < 2 {
        return Err(CmdError::Validation(format!(
            "folds {} must be at least 2",
            cfg.folds
        )));
    }
    Ok(cfg)
}

fn parse_variant<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, CmdError> {
    serde_json::from_value(serde_json::Value::String(s.to_ascii_lowercase()))
        .map_err(|e| CmdError::Validation(format!("bad value `{s}`: {e}")))
}

/// Inline JSON, or `@path` / bare path to a JSON file.
fn read_json_arg(arg: &str) -> Result<String, CmdError> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(trimmed.to_string())
    } else {
        let path = trimmed.strip_prefix('@').unwrap_or(trimmed);
        Ok(std::fs::read_to_string(path)?)
    }
}

fn parse_spec_arg(arg: &str) -> Result<EmbedderSpec, CmdError> {
    let text = read_json_arg(arg)?;
    let spec: EmbedderSpec = serde_json::from_str(&text)
        .map_err(|e| CmdError::Validation(format!("embedder spec: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

/// Write bytes atomically: temp file in the target directory, then rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CmdError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(d) => tempfile::NamedTempFile::new_in(d)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(bytes)?;
    tmp.persist(path)
        .map_err(|e| CmdError::Io(e.to_string()))?;
    Ok(())
}

fn read_mono_clip(path: &Path) -> Result<AudioClip, CmdError> {
    Ok(downmix_mono(&read_wav(path)?))
}

/// Manifest paths resolve against the working directory first, then the
/// manifest's own directory.
fn resolve_clip_path(manifest_path: &Path, clip_path: &str) -> PathBuf {
    let p = PathBuf::from(clip_path);
    if p.is_absolute() || p.exists() {
        return p;
    }
    match manifest_path.parent() {
        Some(dir) => dir.join(clip_path),
        None => p,
    }
}

fn sorted_wavs(dir: &Path) -> Result<Vec<PathBuf>, CmdError> {
    let mut wavs: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            p.extension()
                .map(|x| x.eq_ignore_ascii_case("wav"))
                .unwrap_or(false)
        })
        .collect();
    wavs.sort();
    if wavs.is_empty() {
        return Err(CmdError::Validation(format!(
            "no WAV files in {}",
            dir.display()
        )));
    }
    Ok(wavs)
}

fn param_summary(spec: &EmbedderSpec) -> String {
    match spec.kind {
        EmbedderKind::LsbReplace | EmbedderKind::LsbMatch | EmbedderKind::IntWavelet => {
            format!("C={}", spec.capacity_bps)
        }
        EmbedderKind::CoxDct => format!("alpha={}", spec.alpha),
        EmbedderKind::SsDctAdd | EmbedderKind::SsTimeAdd => format!("a={}", spec.alpha),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_gen_synthetic(cfg: &RunConfig, args: &GenSyntheticArgs) -> Result<(), CmdError> {
    let mut synth = match args.profile.as_str() {
        "bandlimited" => SynthConfig::default(),
        "tonal" => SynthConfig::loud(),
        other => {
            return Err(CmdError::Validation(format!(
                "unknown profile `{other}` (bandlimited | tonal)"
            )));
        }
    };
    synth.n_clips = args.clips;
    synth.duration_secs = args.duration;
    synth.sample_rate = args.rate;
    synth.seed = cfg.seed;

    std::fs::create_dir_all(&args.out_dir)?;
    let mut rows = Vec::with_capacity(args.clips);
    for i in 0..args.clips {
        let clip = synth_clip(&synth, i);
        let name = format!("cover_{i:04}.wav");
        let path = args.out_dir.join(&name);
        write_wav(&clip, &path)?;
        rows.push(ManifestRow {
            clip_id: format!("cover_{i:04}"),
            path: name,
            role: Label::Cover,
            embedder: None,
            seed: synth.seed.wrapping_add(i as u64),
        });
    }
    let manifest = CorpusManifest { rows };
    manifest.write_csv(args.out_dir.join("covers.csv"))?;
    println!(
        "wrote {} covers and covers.csv to {}",
        args.clips,
        args.out_dir.display()
    );
    Ok(())
}

fn cmd_gen_corpus(cfg: &RunConfig, args: &GenCorpusArgs) -> Result<(), CmdError> {
    let grid_text = read_json_arg(&args.grid)?;
    let grid: Vec<EmbedderSpec> = serde_json::from_str(&grid_text)
        .map_err(|e| CmdError::Validation(format!("grid JSON: {e}")))?;
    for spec in &grid {
        spec.validate()?;
    }
    let covers = sorted_wavs(&args.cover_dir)?;
    std::fs::create_dir_all(&args.out_dir)?;

    // One task per cover; stego seeds are indexed by (cover, spec) so the
    // assignment does not depend on scheduling or on skipped clips.
    let per_cover: Result<Vec<(Vec<ManifestRow>, usize, usize)>, CmdError> = covers
        .par_iter()
        .enumerate()
        .map(|(cover_idx, cover_path)| {
            let stem = cover_path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("clip")
                .to_string();
            let clip = match read_mono_clip(cover_path) {
                Ok(c) => c,
                Err(e) => {
                    warn_json(&format!("skipping unreadable cover: {e}"), &stem);
                    return Ok((Vec::new(), grid.len(), grid.len()));
                }
            };
            let mut rows = vec![ManifestRow {
                clip_id: stem.clone(),
                path: cover_path.to_string_lossy().into_owned(),
                role: Label::Cover,
                embedder: None,
                seed: cfg.seed,
            }];
            let mut failures = 0usize;
            for (spec_idx, spec) in grid.iter().enumerate() {
                let row_seed = cfg
                    .seed
                    .wrapping_add(1000)
                    .wrapping_add((cover_idx * grid.len() + spec_idx) as u64);
                let seeded = spec.with_seed(row_seed);
                let clip_id = format!("{stem}__{:02}_{}", spec_idx, seeded.kind.as_str());
                match embed(&clip, &seeded) {
                    Ok(stego) => {
                        let name = format!("{clip_id}.wav");
                        write_wav(&stego, args.out_dir.join(&name))?;
                        rows.push(ManifestRow {
                            clip_id,
                            path: name,
                            role: Label::Stego,
                            embedder: Some(seeded),
                            seed: row_seed,
                        });
                    }
                    Err(e) => {
                        failures += 1;
                        warn_json(&format!("embed failed: {e}"), &clip_id);
                    }
                }
            }
            Ok((rows, failures, grid.len()))
        })
        .collect();

    let mut rows = Vec::new();
    let mut stego_failures = 0usize;
    let mut stego_attempts = 0usize;
    for (cover_rows, failures, attempts) in per_cover? {
        rows.extend(cover_rows);
        stego_failures += failures;
        stego_attempts += attempts;
    }
    if rows.is_empty() || (!grid.is_empty() && stego_failures == stego_attempts) {
        return Err(CmdError::Validation(
            "no clips could be processed".to_string(),
        ));
    }
    let manifest = CorpusManifest { rows };
    manifest.write_csv(args.out_dir.join("manifest.csv"))?;
    println!(
        "wrote {} manifest rows ({} embed failures) to {}",
        manifest.rows.len(),
        stego_failures,
        args.out_dir.display()
    );
    Ok(())
}

fn load_covers(input: &Path) -> Result<Vec<AudioClip>, CmdError> {
    if input.extension().map(|e| e == "csv").unwrap_or(false) {
        let manifest = CorpusManifest::read_csv(input)?;
        let covers: Result<Vec<_>, CmdError> = manifest
            .rows
            .iter()
            .filter(|r| r.role == Label::Cover)
            .map(|r| read_mono_clip(&resolve_clip_path(input, &r.path)))
            .collect();
        let covers = covers?;
        if covers.is_empty() {
            return Err(CmdError::Validation("manifest has no cover rows".into()));
        }
        Ok(covers)
    } else {
        sorted_wavs(input)?
            .iter()
            .map(|p| read_mono_clip(p))
            .collect()
    }
}

fn cmd_sense(cfg: &RunConfig, args: &SenseArgs) -> Result<(), CmdError> {
    let mut spec = parse_spec_arg(&args.spec)?;
    if spec.seed == 0 {
        spec.seed = cfg.seed;
    }
    let covers = load_covers(&args.input)?;
    let report = sensitivity_report(&covers, &spec, args.planes)?;

    let mut csv_text = String::from("method,param");
    for p in &report.planes {
        csv_text.push_str(&format!(",s{p}"));
    }
    csv_text.push('\n');
    csv_text.push_str(&format!(
        "{},{}",
        spec.kind.as_str(),
        param_summary(&spec)
    ));
    for s in &report.sensitivity {
        csv_text.push_str(&format!(",{s}"));
    }
    csv_text.push('\n');
    write_atomic(&args.out, csv_text.as_bytes())?;
    let json_path = args.out.with_extension("json");
    write_atomic(
        &json_path,
        serde_json::to_string_pretty(&report)
            .map_err(CmdError::from)?
            .as_bytes(),
    )?;

    println!(
        "{:<12} {:<10} {}",
        spec.kind.as_str(),
        param_summary(&spec),
        report
            .sensitivity
            .iter()
            .map(|s| format!("{:6.3}", s))
            .collect::<Vec<_>>()
            .join(" ")
    );
    Ok(())
}

fn extract_for_row(
    cfg: &RunConfig,
    calib: &CalibrationSpec,
    clip: &AudioClip,
) -> Result<Vec<f64>, CmdError> {
    let ec = cfg.extractor_config();
    let fv = match cfg.extractor {
        ExtractorKind::Proposed => extract_features_cfg(clip, calib, &ec)?,
        ExtractorKind::Mfcc => extract_baseline(clip, BaselineKind::Mfcc, &ec, cfg.double_log)?,
        ExtractorKind::D2mfcc => {
            extract_baseline(clip, BaselineKind::D2Mfcc, &ec, cfg.double_log)?
        }
        ExtractorKind::Rmfcc => extract_baseline(clip, BaselineKind::Rmfcc, &ec, cfg.double_log)?,
    };
    Ok(fv.values)
}

fn cmd_features(cfg: &RunConfig, args: &FeaturesArgs) -> Result<(), CmdError> {
    let manifest = CorpusManifest::read_csv(&args.manifest)?;
    if manifest.rows.is_empty() {
        return Err(CmdError::Validation("empty manifest".into()));
    }
    let calib = cfg.calibration_spec()?;

    let rows: Result<Vec<(String, Label, Vec<f64>)>, CmdError> = manifest
        .rows
        .par_iter()
        .map(|row| {
            let clip = read_mono_clip(&resolve_clip_path(&args.manifest, &row.path))?;
            let values = extract_for_row(cfg, &calib, &clip)?;
            Ok((row.clip_id.clone(), row.role, values))
        })
        .collect();
    let rows = rows?;

    let width = rows[0].2.len();
    let mut text = String::from("clip_id,label");
    for i in 1..=width {
        text.push_str(&format!(",f{i:03}"));
    }
    text.push('\n');
    for (id, label, values) in &rows {
        text.push_str(id);
        text.push(',');
        text.push_str(label.as_str());
        for v in values {
            text.push_str(&format!(",{v}"));
        }
        text.push('\n');
    }
    write_atomic(&args.out, text.as_bytes())?;
    println!(
        "wrote {} rows x {width} features to {}",
        rows.len(),
        args.out.display()
    );

    if let Some(top_n) = args.export_top {
        export_top_features(&rows, width, top_n, &args.out)?;
    }
    Ok(())
}

/// Rank features by two-group ANOVA F and export the strongest columns.
fn export_top_features(
    rows: &[(String, Label, Vec<f64>)],
    width: usize,
    top_n: usize,
    out: &Path,
) -> Result<(), CmdError> {
    let covers: Vec<&Vec<f64>> = rows
        .iter()
        .filter(|r| r.1 == Label::Cover)
        .map(|r| &r.2)
        .collect();
    let stegos: Vec<&Vec<f64>> = rows
        .iter()
        .filter(|r| r.1 == Label::Stego)
        .map(|r| &r.2)
        .collect();
    if covers.len() < 2 || stegos.len() < 2 {
        return Err(CmdError::Validation(
            "--export-top needs at least two clips per class".into(),
        ));
    }
    let mut scored: Vec<(usize, f64)> = (0..width)
        .map(|j| {
            let a: Vec<f64> = covers.iter().map(|r| r[j]).collect();
            let b: Vec<f64> = stegos.iter().map(|r| r[j]).collect();
            let (f, _) = anova_f(&a, &b).unwrap_or((0.0, 1.0));
            (j, if f.is_finite() { f } else { f64::MAX })
        })
        .collect();
    scored.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then(x.0.cmp(&y.0)));
    let picked: Vec<usize> = scored.iter().take(top_n).map(|&(j, _)| j).collect();

    let mut text = String::from("clip_id,label");
    for &j in &picked {
        text.push_str(&format!(",f{:03}", j + 1));
    }
    text.push('\n');
    for (id, label, values) in rows {
        text.push_str(id);
        text.push(',');
        text.push_str(label.as_str());
        for &j in &picked {
            text.push_str(&format!(",{}", values[j]));
        }
        text.push('\n');
    }
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("features");
    let top_path = out.with_file_name(format!("{stem}_top{top_n}.csv"));
    write_atomic(&top_path, text.as_bytes())?;
    println!("wrote top-{top_n} feature columns to {}", top_path.display());
    Ok(())
}

/// Parse a feature CSV written by `cmd_features`.
pub fn read_features_csv(path: &Path) -> Result<Dataset, CmdError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CmdError::Validation(format!("feature CSV: {e}")))?;
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut ids = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CmdError::Validation(e.to_string()))?;
        if record.len() < 3 {
            return Err(CmdError::Validation("feature CSV row too short".into()));
        }
        ids.push(record[0].to_string());
        y.push(record[1].parse::<Label>().map_err(CmdError::Validation)?);
        let values: Result<Vec<f64>, _> = record.iter().skip(2).map(str::parse::<f64>).collect();
        x.push(values.map_err(|e| CmdError::Validation(format!("bad feature value: {e}")))?);
    }
    Ok(Dataset::new(x, y, ids)?)
}

fn read_mask_file(path: &Path) -> Result<Vec<bool>, CmdError> {
    #[derive(Deserialize)]
    struct MaskFile {
        mask: Vec<bool>,
    }
    let text = std::fs::read_to_string(path)?;
    let parsed: MaskFile = serde_json::from_str(&text)
        .map_err(|e| CmdError::Validation(format!("mask file: {e}")))?;
    Ok(parsed.mask)
}

fn cmd_train(cfg: &RunConfig, args: &TrainArgs) -> Result<(), CmdError> {
    let ds = read_features_csv(&args.features)?;
    let mut params = cfg.svm_params();
    if let Some(mask_path) = &args.mask {
        params.feature_mask = Some(read_mask_file(mask_path)?);
    }
    let model = svm_train(&ds, &params)?;
    write_atomic(
        &args.out,
        serde_json::to_string_pretty(&model)
            .map_err(CmdError::from)?
            .as_bytes(),
    )?;
    println!(
        "trained on {} rows ({} support vectors); model at {}",
        ds.n(),
        model.support_vectors.len(),
        args.out.display()
    );
    Ok(())
}

fn print_cv_report(report: &CvReport) {
    println!("{:<6} {:>8} {:>8} {:>8}", "fold", "Se", "Sp", "acc");
    for (i, fold) in report.folds.iter().enumerate() {
        println!(
            "{:<6} {:>8.4} {:>8.4} {:>8.4}",
            i + 1,
            fold.se,
            fold.sp,
            fold.accuracy
        );
    }
    println!(
        "{:<6} {:>8.4} {:>8.4} {:>8.4}",
        "mean", report.mean.se, report.mean.sp, report.mean.accuracy
    );
    println!(
        "{:<6} {:>8.4} {:>8.4} {:>8.4}",
        "pooled", report.pooled.se, report.pooled.sp, report.pooled.accuracy
    );
}

fn write_cv_outputs(report: &CvReport, out: &Path) -> Result<(), CmdError> {
    let json_path = out.with_extension("json");
    write_atomic(
        &json_path,
        serde_json::to_string_pretty(report)
            .map_err(CmdError::from)?
            .as_bytes(),
    )?;
    let mut csv_text = String::from("fold,se,sp,accuracy\n");
    for (i, f) in report.folds.iter().enumerate() {
        csv_text.push_str(&format!("{},{},{},{}\n", i + 1, f.se, f.sp, f.accuracy));
    }
    csv_text.push_str(&format!(
        "mean,{},{},{}\n",
        report.mean.se, report.mean.sp, report.mean.accuracy
    ));
    csv_text.push_str(&format!(
        "pooled,{},{},{}\n",
        report.pooled.se, report.pooled.sp, report.pooled.accuracy
    ));
    write_atomic(&out.with_extension("csv"), csv_text.as_bytes())?;
    Ok(())
}

fn cmd_cv(cfg: &RunConfig, args: &CvArgs) -> Result<(), CmdError> {
    let ds = read_features_csv(&args.features)?;
    let params = cfg.svm_params();

    let report = if args.ga {
        validate_ga_args(args.ga_population, 0.01)?;
        let ga_cfg = GaConfig {
            population: args.ga_population,
            generations: args.ga_generations,
            seed: cfg.seed,
            ..GaConfig::default()
        };
        match args.ga_scope.as_str() {
            "global" => {
                // One selection over the full set, then plain CV on the mask.
                let sel = ga_select(&ds, &ga_cfg, &params)?;
                let kept = sel.mask.iter().filter(|&&b| b).count();
                println!("global GA kept {kept}/{} features", sel.mask.len());
                kfold_cv(&ds.masked(&sel.mask), cfg.folds, &params, cfg.seed)?
            }
            "per-fold" => cv_with_per_fold_ga(&ds, cfg, &params, &ga_cfg)?,
            other => {
                return Err(CmdError::Validation(format!(
                    "unknown --ga-scope `{other}` (per-fold | global)"
                )));
            }
        }
    } else {
        kfold_cv(&ds, cfg.folds, &params, cfg.seed)?
    };

    print_cv_report(&report);
    if let Some(out) = &args.out {
        write_cv_outputs(&report, out)?;
    }
    Ok(())
}

/// GA runs on the training portion of every fold; the fold's eval rows never
/// influence selection.
fn cv_with_per_fold_ga(
    ds: &Dataset,
    cfg: &RunConfig,
    params: &SvmParams,
    ga_cfg: &GaConfig,
) -> Result<CvReport, CmdError> {
    use crate::ml::FoldMetrics;
    let folds = stratified_folds(&ds.y, cfg.folds, cfg.seed)?;
    let mut per_fold = Vec::new();
    let mut pooled = [0usize; 4]; // tp, tn, fp, fn
    for eval_idx in &folds {
        let train_idx: Vec<usize> = folds
            .iter()
            .filter(|f| !std::ptr::eq(*f, eval_idx))
            .flatten()
            .copied()
            .collect();
        let train = ds.subset(&train_idx);
        let sel = ga_select(&train, ga_cfg, params)?;
        let mut fold_params = params.clone();
        fold_params.feature_mask = Some(sel.mask.clone());
        let model = svm_train(&train, &fold_params)?;
        let (mut tp, mut tn, mut fp, mut fn_) = (0usize, 0usize, 0usize, 0usize);
        for &i in eval_idx {
            let (got, _) = svm_predict(&model, &ds.x[i]);
            match (ds.y[i], got) {
                (Label::Stego, Label::Stego) => tp += 1,
                (Label::Stego, Label::Cover) => fn_ += 1,
                (Label::Cover, Label::Cover) => tn += 1,
                (Label::Cover, Label::Stego) => fp += 1,
            }
        }
        pooled[0] += tp;
        pooled[1] += tn;
        pooled[2] += fp;
        pooled[3] += fn_;
        let div = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        per_fold.push(FoldMetrics {
            se: div(tp, tp + fn_),
            sp: div(tn, tn + fp),
            accuracy: div(tp + tn, tp + tn + fp + fn_),
        });
    }
    let n = per_fold.len() as f64;
    let div = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let mean = FoldMetrics {
        se: per_fold.iter().map(|m| m.se).sum::<f64>() / n,
        sp: per_fold.iter().map(|m| m.sp).sum::<f64>() / n,
        accuracy: per_fold.iter().map(|m| m.accuracy).sum::<f64>() / n,
    };
    let pooled = FoldMetrics {
        se: div(pooled[0], pooled[0] + pooled[3]),
        sp: div(pooled[1], pooled[1] + pooled[2]),
        accuracy: div(
            pooled[0] + pooled[1],
            pooled[0] + pooled[1] + pooled[2] + pooled[3],
        ),
    };
    Ok(CvReport {
        k: cfg.folds,
        seed: cfg.seed,
        folds: per_fold,
        mean,
        pooled,
    })
}

fn validate_ga_args(population: usize, mutation_rate: f64) -> Result<(), CmdError> {
    if population < 2 || !population.is_multiple_of(2) {
        return Err(CmdError::Validation(format!(
            "GA population {population} must be even and at least 2"
        )));
    }
    if !(0.0..=1.0).contains(&mutation_rate) {
        return Err(CmdError::Validation(format!(
            "mutation rate {mutation_rate} must be in [0, 1]"
        )));
    }
    Ok(())
}

fn cmd_ga(cfg: &RunConfig, args: &GaArgs) -> Result<(), CmdError> {
    validate_ga_args(args.population, args.mutation_rate)?;
    let ds = read_features_csv(&args.features)?;
    let ga_cfg = GaConfig {
        population: args.population,
        generations: args.generations,
        mutation_rate: args.mutation_rate,
        elitism: args.elitism,
        seed: cfg.seed,
        ..GaConfig::default()
    };
    let sel = ga_select(&ds, &ga_cfg, &cfg.svm_params())?;
    write_atomic(
        &args.out,
        serde_json::to_string_pretty(&sel)
            .map_err(CmdError::from)?
            .as_bytes(),
    )?;
    let kept = sel.mask.iter().filter(|&&b| b).count();
    println!(
        "kept {kept}/{} features, fitness {:.4}; mask at {}",
        sel.mask.len(),
        sel.best_fitness,
        args.out.display()
    );
    Ok(())
}

fn cmd_scan(cfg: &RunConfig, args: &ScanArgs) -> Result<(), CmdError> {
    let text = std::fs::read_to_string(&args.model)?;
    let model: SvmModel = serde_json::from_str(&text)
        .map_err(|e| CmdError::Validation(format!("model file: {e}")))?;
    let calib = cfg.calibration_spec()?;

    let mut verdicts = Vec::new();
    for wav in &args.wavs {
        let clip = read_mono_clip(wav)?;
        let values = extract_for_row(cfg, &calib, &clip)?;
        if values.len() != model.expected_input_dim() {
            return Err(CmdError::Validation(format!(
                "model expects {} features, extractor config produces {}",
                model.expected_input_dim(),
                values.len()
            )));
        }
        let (label, margin) = svm_predict(&model, &values);
        println!("{}\t{}\t{margin:.6}", wav.display(), label);
        verdicts.push(serde_json::json!({
            "path": wav.to_string_lossy(),
            "label": label.as_str(),
            "margin": margin,
        }));
    }
    if let Some(out) = &args.out {
        write_atomic(
            out,
            serde_json::to_string_pretty(&verdicts)
                .map_err(CmdError::from)?
                .as_bytes(),
        )?;
    }
    Ok(())
}

fn cmd_noise_pmf(cfg: &RunConfig, args: &NoisePmfArgs) -> Result<(), CmdError> {
    let mut spec = parse_spec_arg(&args.spec)?;
    if spec.seed == 0 {
        spec.seed = cfg.seed;
    }
    let cover = read_mono_clip(&args.cover)?;
    let stego = embed(&cover, &spec)?;
    let pmf = noise_pmf(&steg_noise(&cover, &stego)?)?;

    let mut text = String::from("value,prob\n");
    for (v, p) in pmf.support.iter().zip(&pmf.probs) {
        text.push_str(&format!("{v},{p}\n"));
    }
    write_atomic(&args.out, text.as_bytes())?;
    println!(
        "{} noise values over {} samples; p(0) = {:.4}; wrote {}",
        pmf.support.len(),
        cover.len(),
        pmf.prob(0),
        args.out.display()
    );
    Ok(())
}

fn cmd_psd(_cfg: &RunConfig, args: &PsdArgs) -> Result<(), CmdError> {
    if args.seg_len < 2 || args.hop == 0 {
        return Err(CmdError::Validation(format!(
            "need seg_len ≥ 2 and hop ≥ 1 (got {} and {})",
            args.seg_len, args.hop
        )));
    }
    let clip = read_mono_clip(&args.wav)?;
    let psd = psd_welch(&clip.samples_f64(), args.seg_len, args.hop, clip.sample_rate)?;
    let mut text = String::from("freq_hz,power\n");
    for (k, p) in psd.bins.iter().enumerate() {
        text.push_str(&format!("{},{p}\n", psd.bin_hz(k)));
    }
    write_atomic(&args.out, text.as_bytes())?;
    println!(
        "{} PSD bins (nfft {}) written to {}",
        psd.bins.len(),
        psd.nfft,
        args.out.display()
    );
    Ok(())
}
