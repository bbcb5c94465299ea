mod analyze;
mod args;
mod dynamics;
mod output;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use chaoscipher::analysis::{
    differential_experiment, key_sensitivity_experiment, noise_robustness_experiment,
};
use chaoscipher::cipher::{decrypt_with_config, encrypt_with_config};
use chaoscipher::keys::KEY_ENV_VAR;
use chaoscipher::keystream::keystream_for_config;
use chaoscipher::{
    derive_config, generate_key, imageio, key_from_seed, ChaoticKey, CipherMode, Error,
    ImageBuffer, Result,
};
use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, CryptArgs, ExperimentInput, KeyArgs};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("{}", e.name());
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Keygen { bits } => {
            println!("{}", generate_key(bits)?);
            Ok(())
        }
        Command::Encrypt(args) => crypt(args, true),
        Command::Decrypt(args) => crypt(args, false),
        Command::Analyze(args) => analyze::run(args),
        Command::Autocorr(args) => dynamics::autocorr(args),
        Command::Lyapunov(args) => dynamics::lyapunov(args),
        Command::Bifurcate(args) => dynamics::bifurcate(args),
        Command::NoiseTest { input, variances, out } => {
            let (img, key, mode) = experiment_inputs(&input)?;
            let report = noise_robustness_experiment(&img, &key, mode, &variances, input.seed)?;
            output::emit_report(&report, &out)
        }
        Command::Keysens { input, coefficient, perturbation, out } => {
            let (img, key, mode) = experiment_inputs(&input)?;
            let coefficient = coefficient.unwrap_or_else(|| match mode {
                CipherMode::Hyper3D => "a1".to_owned(),
                CipherMode::Mem2D => "k".to_owned(),
            });
            let report = key_sensitivity_experiment(&img, &key, mode, &coefficient, perturbation)?;
            output::emit_report(&report, &out)
        }
        Command::DiffTest { input, digit, out } => {
            let (img, key, mode) = experiment_inputs(&input)?;
            output::emit_report(&differential_experiment(&img, &key, mode, digit)?, &out)
        }
    }
}

/// Resolves the key from `--key`, `--key-file` or the environment, in that
/// order. clap already rejects `--key` together with `--key-file`.
fn resolve_key(args: &KeyArgs) -> Result<Option<ChaoticKey>> {
    if let Some(hex) = &args.key {
        return ChaoticKey::from_hex(hex).map(Some);
    }
    if let Some(path) = &args.key_file {
        return ChaoticKey::from_hex(&fs::read_to_string(path)?).map(Some);
    }
    match std::env::var(KEY_ENV_VAR) {
        Ok(hex) if !hex.trim().is_empty() => ChaoticKey::from_hex(&hex).map(Some),
        _ => Ok(None),
    }
}

fn require_key(args: &KeyArgs) -> Result<ChaoticKey> {
    resolve_key(args)?.ok_or_else(|| {
        Error::InvalidKey(format!("no key given (use --key, --key-file or {KEY_ENV_VAR})"))
    })
}

fn crypt(args: CryptArgs, encrypt: bool) -> Result<()> {
    let key = require_key(&args.key)?;
    let start = Instant::now();
    let img = imageio::load(&args.input)?;
    let mode = args.mode.unwrap_or_else(|| CipherMode::default_for(&img));
    let cfg = derive_config(&key, mode.map_id())?;
    let out = if encrypt { encrypt_with_config(&img, &cfg)? } else { decrypt_with_config(&img, &cfg)? };
    imageio::save(&out, &args.output)?;
    if let Some(path) = &args.dump_keystream {
        fs::write(path, keystream_for_config(&cfg, img.len())?.to_bytes())?;
    }
    let summary = serde_json::json!({
        "operation": if encrypt { "encrypt" } else { "decrypt" },
        "width": img.width(),
        "height": img.height(),
        "channels": img.channels(),
        "mode": mode.to_string(),
        "elapsed_ms": start.elapsed().as_secs_f64() * 1e3,
    });
    println!("{summary}");
    Ok(())
}

/// Image, key and mode for an experiment. Without `--input` a synthetic
/// test card is used; without a key one is derived from `--seed` so runs
/// stay reproducible.
fn experiment_inputs(input: &ExperimentInput) -> Result<(ImageBuffer, ChaoticKey, CipherMode)> {
    let img = match &input.input {
        Some(path) => imageio::load(path)?,
        None => test_card(256, 256),
    };
    let key = resolve_key(&input.key)?.unwrap_or_else(|| key_from_seed(input.seed));
    let mode = input.mode.unwrap_or_else(|| CipherMode::default_for(&img));
    Ok((img, key, mode))
}

/// Grayscale pattern with smooth gradients, a disc and sharp bars, so both
/// flat regions and edges are represented.
fn test_card(w: usize, h: usize) -> ImageBuffer {
    let (cx, cy, r) = (w as f64 / 2.0, h as f64 / 2.0, w.min(h) as f64 / 4.0);
    let mut px = Vec::with_capacity(w * h);
    for row in 0..h {
        for col in 0..w {
            let (x, y) = (col as f64, row as f64);
            let v = if ((x - cx).powi(2) + (y - cy).powi(2)).sqrt() < r {
                230.0 - 0.3 * y
            } else if row < h / 8 {
                if (col / 16) % 2 == 0 { 20.0 } else { 200.0 }
            } else {
                40.0 + 150.0 * (x + y) / (w + h) as f64
            };
            px.push(v.round() as u8);
        }
    }
    ImageBuffer::new(w, h, 1, px).expect("consistent dimensions")
}

pub(crate) fn load_all(paths: &[impl AsRef<Path>]) -> Result<Vec<ImageBuffer>> {
    paths.iter().map(imageio::load).collect()
}
