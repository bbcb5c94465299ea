use std::path::PathBuf;

use chaoscipher::analysis::{Direction, DEFAULT_ADJACENT_SAMPLES, DEFAULT_PERTURBATION};
use chaoscipher::maps::{MapId, DEFAULT_BURN_IN};
use chaoscipher::CipherMode;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "chaoscipher", version, about = "Chaotic-map keystream image cipher and analysis tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a fresh random hex key.
    Keygen {
        #[arg(long, default_value_t = 256, value_parser = parse_bits)]
        bits: u32,
    },
    /// Encrypt a P5/P6 image.
    Encrypt(CryptArgs),
    /// Decrypt a P5/P6 image.
    Decrypt(CryptArgs),
    /// Compute an image metric.
    Analyze(AnalyzeArgs),
    /// Autocorrelation of map state sequences.
    Autocorr(AutocorrArgs),
    /// Lyapunov spectrum of a map.
    Lyapunov(LyapunovArgs),
    /// Bifurcation sweep over one map coefficient.
    Bifurcate(BifurcateArgs),
    /// Decryption quality after Gaussian noise is added to the ciphertext.
    NoiseTest {
        #[command(flatten)]
        input: ExperimentInput,
        /// Comma-separated noise variances.
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 100.0, 1000.0])]
        variances: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Decryption with one map coefficient perturbed.
    Keysens {
        #[command(flatten)]
        input: ExperimentInput,
        /// Coefficient to perturb (default a1 for 3d, k for 2d).
        #[arg(long)]
        coefficient: Option<String>,
        #[arg(long, default_value_t = DEFAULT_PERTURBATION)]
        perturbation: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// NPCR/UACI for key-digit, one-pixel and plaintext-vs-output pairs.
    DiffTest {
        #[command(flatten)]
        input: ExperimentInput,
        /// Index of the hex key digit to change.
        #[arg(long, default_value_t = 0)]
        digit: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn parse_bits(s: &str) -> Result<u32, String> {
    match s.parse::<u32>() {
        Ok(b @ (128 | 256)) => Ok(b),
        _ => Err(format!("key length must be 128 or 256, got `{s}`")),
    }
}

#[derive(Debug, Args)]
pub struct KeyArgs {
    /// Hex key (falls back to the CHAOSCIPHER_KEY environment variable).
    #[arg(long, conflicts_with = "key_file")]
    pub key: Option<String>,
    /// File containing the hex key.
    #[arg(long)]
    pub key_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CryptArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: PathBuf,
    #[command(flatten)]
    pub key: KeyArgs,
    /// 3d or 2d; defaults to 3d for grayscale and 2d for color input.
    #[arg(long)]
    pub mode: Option<CipherMode>,
    /// Also write the keystream bytes (all streams concatenated) here.
    #[arg(long)]
    pub dump_keystream: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentInput {
    /// Plain image; a built-in 256x256 test card when omitted.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub key: KeyArgs,
    #[arg(long)]
    pub mode: Option<CipherMode>,
    /// Seed for noise and for the fallback key.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long = "out")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Entropy,
    Correlation,
    Adjacency,
    Histogram,
    Mse,
    Ssim,
    Psnr,
    Npcr,
    Uaci,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(value_enum)]
    pub metric: Metric,
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Adjacency direction; all three when omitted.
    #[arg(long)]
    pub direction: Option<Direction>,
    #[arg(long, default_value_t = DEFAULT_ADJACENT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub per_channel: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(long, default_value = "2d")]
    pub map: MapId,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub a1: Option<f64>,
    #[arg(long)]
    pub a2: Option<f64>,
    #[arg(long)]
    pub a3: Option<f64>,
    #[arg(long)]
    pub b1: Option<f64>,
    #[arg(long)]
    pub b2: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    /// Initial state as comma-separated components.
    #[arg(long, value_delimiter = ',')]
    pub seed_state: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    pub burn_in: usize,
}

impl MapArgs {
    pub fn overrides(&self) -> [(&'static str, Option<f64>); 7] {
        [
            ("k", self.k),
            ("a1", self.a1),
            ("a2", self.a2),
            ("a3", self.a3),
            ("b1", self.b1),
            ("b2", self.b2),
            ("c", self.c),
        ]
    }
}

#[derive(Debug, Args)]
pub struct LyapunovArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub renorm: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AutocorrArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub max_lag: usize,
    /// Correlate the raw state values instead of the normalized keystream
    /// values.
    #[arg(long)]
    pub raw: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BifurcateArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long)]
    pub param: String,
    /// Sweep range as lo:hi.
    #[arg(long, value_parser = parse_range)]
    pub range: (f64, f64),
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value = "x")]
    pub component: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long = "out")]
    pub out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}
