use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, ImageBuffer, Result};

/// Additive Gaussian noise: variance in squared intensity units and the
/// seed of the generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub variance: f64,
    pub rng_seed: u64,
}

impl NoiseSpec {
    pub fn new(variance: f64, rng_seed: u64) -> Result<Self> {
        if variance < 0.0 || !variance.is_finite() {
            return Err(Error::InvalidArgument(format!("noise variance must be >= 0, got {variance}")));
        }
        Ok(NoiseSpec { variance, rng_seed })
    }
}

/// Standard normal deviates from the Box–Muller transform, two per pair
/// of uniforms.
struct BoxMuller {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl BoxMuller {
    fn new(seed: u64) -> Self {
        BoxMuller { rng: ChaCha8Rng::seed_from_u64(seed), spare: None }
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the logarithm finite.
        let u1 = 1.0 - self.rng.gen::<f64>();
        let u2: f64 = self.rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Adds N(0, variance) noise to every sample, rounding and clamping back to
/// bytes. Deterministic for a given seed.
pub fn add_gaussian_noise(img: &ImageBuffer, spec: &NoiseSpec) -> Result<ImageBuffer> {
    let spec = NoiseSpec::new(spec.variance, spec.rng_seed)?;
    if spec.variance == 0.0 {
        return Ok(img.clone());
    }
    let sigma = spec.variance.sqrt();
    let mut normal = BoxMuller::new(spec.rng_seed);
    let out = img
        .pixels()
        .iter()
        .map(|&p| (p as f64 + sigma * normal.next()).round().clamp(0.0, 255.0) as u8)
        .collect();
    img.with_pixels(out)
}
