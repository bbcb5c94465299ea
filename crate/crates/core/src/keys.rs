//! Secret keys and the key → map configuration derivation.
//!
//! A key is a lowercase hex string of 128 or 256 bits drawn from the OS
//! random source. [`derive_config`] splits the key bytes into contiguous
//! fields, one per derived quantity. Each field is XOR-folded down to a
//! fixed bit width, so flipping any key bit flips exactly one bit of one
//! folded value, and then mapped affinely into a range that keeps the map
//! in its hyperchaotic regime:
//!
//! | map | field order            | range                                   |
//! |-----|------------------------|-----------------------------------------|
//! | 3D  | x0, y0, z0             | [0.05, 0.95)                            |
//! | 3D  | a1, a2, a3             | reference value + [−0.005, 0.005)       |
//! | 2D  | x0                     | [0.05, 0.5)                             |
//! | 2D  | q0                     | [0.05, 0.95)                            |
//! | 2D  | k                      | [1.74, 1.76)                            |
//!
//! The remaining 3D coefficients (b1, b2, c) stay at their reference values.
//!
//! The envelope alone does not guarantee chaos: periodic windows and
//! coexisting periodic attractors sit inside it for both maps. Each
//! candidate is therefore checked with a short Lyapunov probe
//! ([`is_admissible`]) and, if any exponent is not clearly positive, the
//! next candidate ([`derive_candidate`]) is tried. The choice is a pure
//! function of the key, so encryption and decryption agree.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::maps::{
    lyapunov_spectrum, Hyper3DParams, MapId, MapParams, MapState, Mem2DParams, State2, State3, DEFAULT_BURN_IN,
};
use crate::{Error, Result};

pub const DEFAULT_KEY_BITS: u32 = 256;

/// Environment variable the CLI reads a key from.
pub const KEY_ENV_VAR: &str = "CHAOSCIPHER_KEY";

/// Hex-encoded secret key.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChaoticKey {
    hex: String,
}

impl ChaoticKey {
    /// Parses a hex key. Surrounding whitespace (such as the trailing
    /// newline of a key file) is ignored and upper-case digits are folded to
    /// lower case.
    pub fn from_hex(s: &str) -> Result<Self> {
        let hex = s.trim().to_ascii_lowercase();
        if let Some(bad) = hex.chars().find(|c| !c.is_ascii_hexdigit()) {
            return Err(Error::InvalidKey(format!("`{bad}` is not a hexadecimal digit")));
        }
        check_bits(hex.len() as u32 * 4)?;
        Ok(ChaoticKey { hex })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        check_bits(bytes.len() as u32 * 8)?;
        let hex = bytes.iter().map(|b| format!("{b:02x}")).collect();
        Ok(ChaoticKey { hex })
    }

    pub fn hex(&self) -> &str {
        &self.hex
    }

    pub fn bit_length(&self) -> u32 {
        self.hex.len() as u32 * 4
    }

    pub fn bytes(&self) -> Vec<u8> {
        self.hex
            .as_bytes()
            .chunks(2)
            .map(|pair| {
                let digits = std::str::from_utf8(pair).expect("validated hex");
                u8::from_str_radix(digits, 16).expect("validated hex")
            })
            .collect()
    }

    /// Copy with the hex digit at `index` replaced by the next digit
    /// (mod 16).
    pub fn with_digit_changed(&self, index: usize) -> Result<Self> {
        let digit = self
            .hex
            .as_bytes()
            .get(index)
            .ok_or_else(|| Error::InvalidArgument(format!("key has no hex digit {index}")))?;
        let value = (*digit as char).to_digit(16).expect("validated hex");
        let replacement = std::char::from_digit((value + 1) % 16, 16).expect("digit < 16");
        let mut hex = self.hex.clone();
        hex.replace_range(index..=index, &replacement.to_string());
        Ok(ChaoticKey { hex })
    }
}

fn check_bits(bits: u32) -> Result<()> {
    match bits {
        128 | 256 => Ok(()),
        other => Err(Error::InvalidKey(format!("key length must be 128 or 256 bits, got {other}"))),
    }
}

impl FromStr for ChaoticKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChaoticKey::from_hex(s)
    }
}

impl fmt::Display for ChaoticKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex)
    }
}

// Keys are secrets; keep them out of debug logs.
impl fmt::Debug for ChaoticKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChaoticKey({} bits)", self.bit_length())
    }
}

/// Draws a fresh key of `bit_length` bits (128 or 256) from the operating
/// system's secure random source.
pub fn generate_key(bit_length: u32) -> Result<ChaoticKey> {
    if !matches!(bit_length, 128 | 256) {
        return Err(Error::InvalidArgument(format!(
            "key length must be 128 or 256 bits, got {bit_length}"
        )));
    }
    let mut buf = vec![0u8; bit_length as usize / 8];
    getrandom::getrandom(&mut buf).map_err(|e| Error::EntropyUnavailable(e.to_string()))?;
    ChaoticKey::from_bytes(&buf)
}

/// Deterministic 256-bit key from a 64-bit seed, for reproducible
/// experiments. Not secret: anyone who knows the seed knows the key.
pub fn key_from_seed(seed: u64) -> ChaoticKey {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf = [0u8; 32];
    rng.fill_bytes(&mut buf);
    ChaoticKey::from_bytes(&buf).expect("32 bytes is a valid key length")
}

/// Everything the cipher needs to regenerate a keystream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConfig {
    pub params: MapParams,
    pub seed: MapState,
    pub burn_in: usize,
}

impl DerivedConfig {
    pub fn map_id(&self) -> MapId {
        self.params.map_id()
    }

    /// Copy with one map coefficient shifted by `delta`.
    pub fn perturbed(&self, coefficient: &str, delta: f64) -> Result<Self> {
        let current = self.params.get(coefficient).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown {} map coefficient `{coefficient}`",
                self.map_id()
            ))
        })?;
        Ok(DerivedConfig {
            params: self.params.with(coefficient, current + delta)?,
            ..*self
        })
    }
}

/// Affine target range of one derived field.
#[derive(Debug, Clone, Copy)]
pub(crate) struct FieldRange {
    pub lo: f64,
    pub span: f64,
    /// Folded width in bits; keeps one quantum of the range well above the
    /// f64 spacing near the top of the range.
    pub bits: u32,
}

const SEED_RANGE: FieldRange = FieldRange { lo: 0.05, span: 0.9, bits: 48 };
const MEM2D_X_RANGE: FieldRange = FieldRange { lo: 0.05, span: 0.45, bits: 48 };
const K_RANGE: FieldRange = FieldRange { lo: 1.74, span: 0.02, bits: 40 };
const PERTURBATION_RANGE: FieldRange = FieldRange { lo: -0.005, span: 0.01, bits: 40 };

/// Splits `bytes` into `n` contiguous groups whose sizes differ by at most
/// one, larger groups first.
fn split_fields(bytes: &[u8], n: usize) -> Vec<&[u8]> {
    let base = bytes.len() / n;
    let extra = bytes.len() % n;
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    for i in 0..n {
        let len = base + usize::from(i < extra);
        out.push(&bytes[start..start + len]);
        start += len;
    }
    out
}

/// XOR-folds a big-endian byte group into `bits` bits. Returns the folded
/// value and its effective width (shorter groups are not padded).
pub(crate) fn fold(group: &[u8], bits: u32) -> (u64, u32) {
    assert!(group.len() <= 16, "field wider than 128 bits");
    let mut v = group.iter().fold(0u128, |acc, &b| (acc << 8) | u128::from(b));
    let width = bits.min(8 * group.len() as u32);
    let mask = (1u128 << width) - 1;
    let mut acc = 0u64;
    while v != 0 {
        acc ^= (v & mask) as u64;
        v >>= width;
    }
    (acc, width)
}

fn field_value(group: &[u8], range: FieldRange) -> f64 {
    let (folded, width) = fold(group, range.bits);
    // span / 2^width is exact; the only rounding is in the final multiply-add.
    let quantum = range.span / (1u64 << width) as f64;
    range.lo + folded as f64 * quantum
}

/// Post-burn-in steps of the chaos check applied to each candidate
/// configuration.
pub const PROBE_STEPS: usize = 20_000;

/// Every Lyapunov exponent of an admissible configuration must exceed this.
pub const MIN_EXPONENT: f64 = 0.005;

pub const MAX_DERIVATION_ATTEMPTS: u32 = 64;

/// Candidate configuration number `attempt` for a key. Attempt 0 reads the
/// key bytes directly; later attempts first XOR them with a ChaCha8 stream
/// keyed by the whole key, so every attempt depends on every key bit.
pub fn derive_candidate(key: &ChaoticKey, map: MapId, attempt: u32) -> DerivedConfig {
    let mut bytes = key.bytes();
    if attempt > 0 {
        let mut seed = [0u8; 32];
        for (i, b) in seed.iter_mut().enumerate() {
            *b = bytes[i % bytes.len()];
        }
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(u64::from(attempt));
        let mut mask = vec![0u8; bytes.len()];
        rng.fill_bytes(&mut mask);
        bytes.iter_mut().zip(&mask).for_each(|(b, m)| *b ^= m);
    }
    match map {
        MapId::Hyper3D => {
            let f = split_fields(&bytes, 6);
            let seed = State3::new(
                field_value(f[0], SEED_RANGE),
                field_value(f[1], SEED_RANGE),
                field_value(f[2], SEED_RANGE),
            );
            let r = Hyper3DParams::REFERENCE;
            let params = Hyper3DParams {
                a1: r.a1 + field_value(f[3], PERTURBATION_RANGE),
                a2: r.a2 + field_value(f[4], PERTURBATION_RANGE),
                a3: r.a3 + field_value(f[5], PERTURBATION_RANGE),
                ..r
            };
            DerivedConfig {
                params: MapParams::Hyper3D(params),
                seed: MapState::Hyper3D(seed),
                burn_in: DEFAULT_BURN_IN,
            }
        }
        MapId::Mem2D => {
            let f = split_fields(&bytes, 3);
            let seed = State2::new(field_value(f[0], MEM2D_X_RANGE), field_value(f[1], SEED_RANGE));
            DerivedConfig {
                params: MapParams::Mem2D(Mem2DParams { k: field_value(f[2], K_RANGE) }),
                seed: MapState::Mem2D(seed),
                burn_in: DEFAULT_BURN_IN,
            }
        }
    }
}

/// True when the orbit of `cfg` is chaotic in every direction over
/// [`PROBE_STEPS`] steps after burn-in.
///
/// Near the reference parameters both maps have periodic windows and
/// coexisting non-chaotic attractors, so a sizeable share of raw candidates
/// would otherwise give periodic keystreams. An orbit can still be captured
/// by a periodic attractor after the probe window; see the README.
pub fn is_admissible(cfg: &DerivedConfig) -> bool {
    lyapunov_spectrum(&cfg.params, &cfg.seed, cfg.burn_in, PROBE_STEPS, 1)
        .is_ok_and(|l| l.exponents.iter().all(|&e| e > MIN_EXPONENT))
}

/// Derives map parameters, initial condition and burn-in from a key: the
/// first admissible candidate.
pub fn derive_config(key: &ChaoticKey, map: MapId) -> Result<DerivedConfig> {
    (0..MAX_DERIVATION_ATTEMPTS)
        .map(|attempt| derive_candidate(key, map, attempt))
        .find(is_admissible)
        .ok_or_else(|| {
            Error::InvalidKey(format!(
                "no chaotic {map} configuration in {MAX_DERIVATION_ATTEMPTS} attempts"
            ))
        })
}
