//! Pixel-statistics and image-comparison metrics.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::{Error, ImageBuffer, Result};

pub type Histogram = [u64; 256];

fn check_shapes(a: &ImageBuffer, b: &ImageBuffer) -> Result<()> {
    if !a.same_shape(b) {
        return Err(Error::ShapeMismatch(format!(
            "{}x{}x{} vs {}x{}x{}",
            a.width(),
            a.height(),
            a.channels(),
            b.width(),
            b.height(),
            b.channels()
        )));
    }
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty images".into()));
    }
    Ok(())
}

fn count(bytes: impl Iterator<Item = u8>) -> Histogram {
    let mut h = [0u64; 256];
    for b in bytes {
        h[b as usize] += 1;
    }
    h
}

/// 256-bin byte counts. With `per_channel` one histogram per channel is
/// returned, otherwise a single histogram over all samples.
pub fn histogram(img: &ImageBuffer, per_channel: bool) -> Vec<Histogram> {
    let c = img.channels();
    if per_channel && c > 1 {
        (0..c)
            .map(|ch| count(img.pixels().iter().skip(ch).step_by(c).copied()))
            .collect()
    } else {
        vec![count(img.pixels().iter().copied())]
    }
}

/// Shannon entropy in bits of a count vector.
pub fn entropy_of_counts(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum();
    h.clamp(0.0, (counts.len() as f64).log2())
}

/// Shannon entropy (bits) of the byte distribution over all samples.
pub fn entropy(img: &ImageBuffer) -> f64 {
    entropy_of_counts(&histogram(img, false)[0])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareTest {
    /// True when uniformity is not rejected at significance `alpha`.
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value > alpha
    }
}

/// Pearson chi-square test of `counts` against the uniform distribution
/// over all of its bins.
pub fn chi_square_uniform(counts: &[u64]) -> Result<ChiSquareTest> {
    if counts.len() < 2 {
        return Err(Error::InvalidArgument("chi-square test needs at least 2 bins".into()));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::InvalidArgument("chi-square test on empty counts".into()));
    }
    let expected = total as f64 / counts.len() as f64;
    let statistic: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dof = counts.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("dof > 0");
    Ok(ChiSquareTest { statistic, dof, p_value: dist.sf(statistic) })
}

pub fn mse(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    check_shapes(a, b)?;
    let sum: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = x.abs_diff(y) as u64;
            d * d
        })
        .sum();
    Ok(sum as f64 / a.len() as f64)
}

/// Peak signal-to-noise ratio; `Identical` stands in for +∞ when MSE = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Decibels(f64),
    Identical,
}

impl Psnr {
    pub fn from_mse(mse: f64) -> Self {
        if mse == 0.0 {
            Psnr::Identical
        } else {
            Psnr::Decibels(10.0 * (255.0 * 255.0 / mse).log10())
        }
    }

    pub fn decibels(self) -> Option<f64> {
        match self {
            Psnr::Decibels(v) => Some(v),
            Psnr::Identical => None,
        }
    }
}

impl From<Psnr> for super::Value {
    fn from(p: Psnr) -> Self {
        match p {
            Psnr::Decibels(v) => super::Value::Number(v),
            Psnr::Identical => super::Value::Text("identical".into()),
        }
    }
}

pub fn psnr(a: &ImageBuffer, b: &ImageBuffer) -> Result<Psnr> {
    Ok(Psnr::from_mse(mse(a, b)?))
}

/// Percentage of sample positions at which `c1` and `c2` differ.
pub fn npcr(c1: &ImageBuffer, c2: &ImageBuffer) -> Result<f64> {
    check_shapes(c1, c2)?;
    let changed = c1.pixels().iter().zip(c2.pixels()).filter(|(a, b)| a != b).count();
    Ok(100.0 * changed as f64 / c1.len() as f64)
}

/// Mean absolute difference normalized by 255, as a percentage.
pub fn uaci(c1: &ImageBuffer, c2: &ImageBuffer) -> Result<f64> {
    check_shapes(c1, c2)?;
    let total: u64 = c1.pixels().iter().zip(c2.pixels()).map(|(&a, &b)| a.abs_diff(b) as u64).sum();
    Ok(100.0 * total as f64 / (255.0 * c1.len() as f64))
}

pub const SSIM_WINDOW: usize = 8;
const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

/// Summed-area table with one row/column of zero padding.
struct Integral {
    stride: usize,
    data: Vec<i64>,
}

impl Integral {
    fn new(w: usize, h: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let stride = w + 1;
        let mut data = vec![0i64; stride * (h + 1)];
        for r in 0..h {
            let mut row_sum = 0i64;
            for c in 0..w {
                row_sum += f(r, c);
                data[(r + 1) * stride + c + 1] = data[r * stride + c + 1] + row_sum;
            }
        }
        Integral { stride, data }
    }

    fn window(&self, r: usize, c: usize, size: usize) -> i64 {
        let s = self.stride;
        self.data[(r + size) * s + c + size] - self.data[r * s + c + size] - self.data[(r + size) * s + c]
            + self.data[r * s + c]
    }
}

fn ssim_single(a: &ImageBuffer, b: &ImageBuffer) -> f64 {
    let (w, h) = (a.width(), a.height());
    let (pa, pb) = (a.pixels(), b.pixels());
    let at = |p: &[u8], r: usize, c: usize| p[r * w + c] as i64;
    let sa = Integral::new(w, h, |r, c| at(pa, r, c));
    let sb = Integral::new(w, h, |r, c| at(pb, r, c));
    let saa = Integral::new(w, h, |r, c| at(pa, r, c) * at(pa, r, c));
    let sbb = Integral::new(w, h, |r, c| at(pb, r, c) * at(pb, r, c));
    let sab = Integral::new(w, h, |r, c| at(pa, r, c) * at(pb, r, c));

    let n = (SSIM_WINDOW * SSIM_WINDOW) as i64;
    // Sample (co)variances: (n·Σxy − Σx·Σy) / (n·(n−1)), numerators exact.
    let norm = (n * (n - 1)) as f64;
    let mut total = 0.0;
    let mut windows = 0usize;
    for r in 0..=h - SSIM_WINDOW {
        for c in 0..=w - SSIM_WINDOW {
            let (xa, xb) = (sa.window(r, c, SSIM_WINDOW), sb.window(r, c, SSIM_WINDOW));
            let mu_a = xa as f64 / n as f64;
            let mu_b = xb as f64 / n as f64;
            let var_a = (n * saa.window(r, c, SSIM_WINDOW) - xa * xa) as f64 / norm;
            let var_b = (n * sbb.window(r, c, SSIM_WINDOW) - xb * xb) as f64 / norm;
            let cov = (n * sab.window(r, c, SSIM_WINDOW) - xa * xb) as f64 / norm;
            let num = (2.0 * mu_a * mu_b + SSIM_C1) * (2.0 * cov + SSIM_C2);
            let den = (mu_a * mu_a + mu_b * mu_b + SSIM_C1) * (var_a + var_b + SSIM_C2);
            total += num / den;
            windows += 1;
        }
    }
    total / windows as f64
}

/// Mean SSIM over all 8×8 windows (stride 1, uniform weights, K1 = 0.01,
/// K2 = 0.03). Multi-channel images are scored per channel and averaged.
pub fn ssim(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    check_shapes(a, b)?;
    if a.width() < SSIM_WINDOW || a.height() < SSIM_WINDOW {
        return Err(Error::TooSmall(format!(
            "SSIM needs at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {}x{}",
            a.width(),
            a.height()
        )));
    }
    if a.channels() == 1 {
        return Ok(ssim_single(a, b));
    }
    let mut sum = 0.0;
    for ch in 0..a.channels() {
        sum += ssim_single(&a.channel(ch)?, &b.channel(ch)?);
    }
    Ok(sum / a.channels() as f64)
}
