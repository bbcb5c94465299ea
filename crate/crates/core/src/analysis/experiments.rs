//! Noise-robustness, key-sensitivity and differential experiment harnesses.
//!
//! Each harness returns an [`AnalysisReport`]. Grid cells run in parallel
//! but rows are always emitted in input order.

use rayon::prelude::*;

use super::metrics::{mse, npcr, psnr, ssim, uaci};
use super::noise::{add_gaussian_noise, NoiseSpec};
use super::report::{AnalysisReport, Table, Value};
use crate::cipher::{decrypt_with_config, encrypt_with_config, CipherMode};
use crate::keys::{derive_config, ChaoticKey};
use crate::{Error, ImageBuffer, Result};

pub const DEFAULT_NOISE_VARIANCES: [f64; 3] = [10.0, 100.0, 1000.0];
pub const DEFAULT_PERTURBATION: f64 = 0.01;

/// Encrypt, add Gaussian noise to the ciphertext, decrypt, and compare the
/// result with the plaintext. One table row per variance, sorted ascending.
pub fn noise_robustness_experiment(
    plain: &ImageBuffer,
    key: &ChaoticKey,
    mode: CipherMode,
    variances: &[f64],
    rng_seed: u64,
) -> Result<AnalysisReport> {
    if variances.is_empty() {
        return Err(Error::InvalidArgument("no noise variances given".into()));
    }
    let specs = variances
        .iter()
        .map(|&v| NoiseSpec::new(v, rng_seed))
        .collect::<Result<Vec<_>>>()?;
    let cfg = derive_config(key, mode.map_id())?;
    let cipher = encrypt_with_config(plain, &cfg)?;

    let mut cells = specs
        .par_iter()
        .map(|spec| {
            let noisy = add_gaussian_noise(&cipher, spec)?;
            let decrypted = decrypt_with_config(&noisy, &cfg)?;
            Ok((spec.variance, mse(plain, &decrypted)?, psnr(plain, &decrypted)?))
        })
        .collect::<Result<Vec<_>>>()?;
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut table = Table::new(["variance", "mse", "psnr"]);
    for (variance, m, p) in cells {
        table.push(vec![Value::Number(variance), Value::Number(m), p.into()])?;
    }
    Ok(AnalysisReport::new("noise-robustness")
        .meta("mode", mode)
        .meta("rng_seed", rng_seed)
        .with_table(table))
}

/// Decrypts once with the true configuration and once with `coefficient`
/// shifted by `perturbation`, reporting mse/ssim/npcr of each against the
/// plaintext. Rows are `true` then `perturbed`.
pub fn key_sensitivity_experiment(
    plain: &ImageBuffer,
    key: &ChaoticKey,
    mode: CipherMode,
    coefficient: &str,
    perturbation: f64,
) -> Result<AnalysisReport> {
    if perturbation <= 0.0 || !perturbation.is_finite() {
        return Err(Error::InvalidArgument(format!("perturbation must be > 0, got {perturbation}")));
    }
    let cfg = derive_config(key, mode.map_id())?;
    let wrong = cfg.perturbed(coefficient, perturbation)?;
    let cipher = encrypt_with_config(plain, &cfg)?;

    let mut table = Table::new(["decryption", "mse", "ssim", "npcr"]);
    for (label, c) in [("true", &cfg), ("perturbed", &wrong)] {
        let d = decrypt_with_config(&cipher, c)?;
        table.push(vec![
            label.into(),
            Value::Number(mse(plain, &d)?),
            Value::Number(ssim(plain, &d)?),
            Value::Number(npcr(plain, &d)?),
        ])?;
    }
    Ok(AnalysisReport::new("key-sensitivity")
        .meta("mode", mode)
        .meta("coefficient", coefficient)
        .meta("perturbation", perturbation)
        .with_table(table))
}

/// Differential metrics in several forms:
///
/// - `key_*`: ciphertexts of the same image under `key` and under `key` with
///   hex digit `digit_index` changed.
/// - `pixel_*`: ciphertexts under `key` of the image and of a copy with the
///   first sample changed by one grey level.
/// - `cipher_*`: plaintext against its ciphertext.
/// - `decrypted_*`: plaintext against its decryption (zero when decryption
///   is exact).
pub fn differential_experiment(
    plain: &ImageBuffer,
    key: &ChaoticKey,
    mode: CipherMode,
    digit_index: usize,
) -> Result<AnalysisReport> {
    let cfg = derive_config(key, mode.map_id())?;
    let other_key = key.with_digit_changed(digit_index)?;
    let c1 = encrypt_with_config(plain, &cfg)?;
    let c2 = encrypt_with_config(plain, &derive_config(&other_key, mode.map_id())?)?;

    let mut tweaked = plain.pixels().to_vec();
    tweaked[0] = tweaked[0].wrapping_add(1);
    let c3 = encrypt_with_config(&plain.with_pixels(tweaked)?, &cfg)?;
    let decrypted = decrypt_with_config(&c1, &cfg)?;

    let mut report = AnalysisReport::new("differential")
        .meta("mode", mode)
        .meta("digit_index", digit_index);
    for (prefix, a, b) in [
        ("key", &c1, &c2),
        ("pixel", &c1, &c3),
        ("cipher", plain, &c1),
        ("decrypted", plain, &decrypted),
    ] {
        report = report
            .scalar(format!("{prefix}_npcr"), Value::Number(npcr(a, b)?))?
            .scalar(format!("{prefix}_uaci"), Value::Number(uaci(a, b)?))?;
    }
    Ok(report)
}
