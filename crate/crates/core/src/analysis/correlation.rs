//! Pearson correlation, adjacent-pixel correlation and sequence
//! autocorrelation.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, ImageBuffer, Result};

pub const DEFAULT_ADJACENT_SAMPLES: usize = 5000;

/// Pearson ρ of two equal-length real sequences.
///
/// If exactly one sequence is constant the covariance is zero and ρ is
/// reported as 0; if both are constant the coefficient is undefined.
pub fn pearson_f64(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!("sequence lengths {} and {}", a.len(), b.len())));
    }
    if a.len() < 2 {
        return Err(Error::InvalidArgument("correlation needs at least 2 samples".into()));
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    match (saa == 0.0, sbb == 0.0) {
        (true, true) => Err(Error::DegenerateVariance),
        (true, false) | (false, true) => Ok(0.0),
        _ => Ok((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0)),
    }
}

pub fn pearson(a: &[u8], b: &[u8]) -> Result<f64> {
    let fa: Vec<f64> = a.iter().map(|&v| v as f64).collect();
    let fb: Vec<f64> = b.iter().map(|&v| v as f64).collect();
    pearson_f64(&fa, &fb)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
    Diagonal,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::Horizontal, Direction::Vertical, Direction::Diagonal];

    /// (row, col) offset of the neighbour.
    fn offset(self) -> (usize, usize) {
        match self {
            Direction::Horizontal => (0, 1),
            Direction::Vertical => (1, 0),
            Direction::Diagonal => (1, 1),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Horizontal => "horizontal",
            Direction::Vertical => "vertical",
            Direction::Diagonal => "diagonal",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "horizontal" | "h" => Ok(Direction::Horizontal),
            "vertical" | "v" => Ok(Direction::Vertical),
            "diagonal" | "d" => Ok(Direction::Diagonal),
            other => Err(Error::InvalidArgument(format!("unknown direction `{other}`"))),
        }
    }
}

/// Pearson ρ over `n_samples` randomly chosen (pixel, neighbour) pairs.
/// For multi-channel images the channel is drawn along with the position
/// and the neighbour is taken in the same channel.
pub fn adjacent_pixel_correlation(
    img: &ImageBuffer,
    direction: Direction,
    n_samples: usize,
    rng_seed: u64,
) -> Result<f64> {
    if img.width() < 2 || img.height() < 2 {
        return Err(Error::TooSmall(format!(
            "adjacent correlation needs at least 2x2, got {}x{}",
            img.width(),
            img.height()
        )));
    }
    if n_samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 sampled pairs".into()));
    }
    let (dr, dc) = direction.offset();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut a = Vec::with_capacity(n_samples);
    let mut b = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let r = rng.gen_range(0..img.height() - dr);
        let c = rng.gen_range(0..img.width() - dc);
        let ch = rng.gen_range(0..img.channels());
        a.push(img.get(r, c, ch) as f64);
        b.push(img.get(r + dr, c + dc, ch) as f64);
    }
    pearson_f64(&a, &b)
}

/// (lag, ρ) for every lag in `1..=max_lag`, where ρ correlates
/// `seq[..n-lag]` with `seq[lag..]`.
pub fn sequence_autocorrelation(seq: &[f64], max_lag: usize) -> Result<Vec<(usize, f64)>> {
    if max_lag == 0 || seq.len() <= max_lag {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= max_lag < length, got max_lag {max_lag} for length {}",
            seq.len()
        )));
    }
    (1..=max_lag)
        .map(|lag| Ok((lag, pearson_f64(&seq[..seq.len() - lag], &seq[lag..])?)))
        .collect()
}
