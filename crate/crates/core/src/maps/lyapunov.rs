//! Lyapunov spectrum by tangent-frame propagation with QR re-orthonormalization.
//!
//! An orthonormal frame of `N` tangent vectors is pushed through the Jacobian
//! along the orbit. Every `renorm_interval` steps the frame is
//! re-orthonormalized with modified Gram–Schmidt; the log of each diagonal
//! stretch factor is accumulated and the sums are divided by the number of
//! steps at the end.

use serde::{Deserialize, Serialize};

use super::{check_state, checked_step, DiscreteMap, MapParams, MapState};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovSpectrum {
    /// Exponents in descending order, one per state dimension.
    pub exponents: Vec<f64>,
    pub iterations: usize,
    pub renorm_interval: usize,
}

impl LyapunovSpectrum {
    pub fn largest(&self) -> f64 {
        self.exponents[0]
    }

    pub fn to_csv(&self) -> Result<String> {
        super::write_csv(
            &["index", "exponent"],
            self.exponents
                .iter()
                .enumerate()
                .map(|(i, e)| vec![(i + 1).to_string(), e.to_string()]),
        )
    }
}

/// Orthonormalizes the columns of `frame` in place and returns the norms
/// removed from each column (the diagonal of R).
fn gram_schmidt<const N: usize>(frame: &mut [[f64; N]; N]) -> [f64; N] {
    let mut r = [0.0; N];
    for j in 0..N {
        for i in 0..j {
            let proj: f64 = (0..N).map(|d| frame[i][d] * frame[j][d]).sum();
            let earlier = frame[i];
            for (v, u) in frame[j].iter_mut().zip(earlier) {
                *v -= proj * u;
            }
        }
        let norm = frame[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        r[j] = norm;
        if norm > 0.0 && norm.is_finite() {
            for v in frame[j].iter_mut() {
                *v /= norm;
            }
        }
    }
    r
}

/// Lyapunov spectrum of any [`DiscreteMap`].
pub fn lyapunov_spectrum_of<M: DiscreteMap<N>, const N: usize>(
    map: &M,
    seed: [f64; N],
    burn_in: usize,
    n: usize,
    renorm_interval: usize,
) -> Result<LyapunovSpectrum> {
    if n == 0 {
        return Err(Error::InvalidArgument("lyapunov iteration count must be at least 1".into()));
    }
    if renorm_interval == 0 {
        return Err(Error::InvalidArgument("renorm_interval must be at least 1".into()));
    }
    check_state(&seed, 0)?;

    let mut s = seed;
    for i in 1..=burn_in {
        s = checked_step(map, s, i)?;
    }

    // frame[j] is the j-th tangent column vector.
    let mut frame = [[0.0; N]; N];
    for (j, col) in frame.iter_mut().enumerate() {
        col[j] = 1.0;
    }
    let mut sums = [0.0; N];

    for i in 1..=n {
        let jac = map.tangent(&s);
        for col in frame.iter_mut() {
            let prev = *col;
            for (row, out) in jac.iter().zip(col.iter_mut()) {
                *out = row.iter().zip(prev.iter()).map(|(a, b)| a * b).sum();
            }
        }
        s = checked_step(map, s, burn_in + i)?;

        if i % renorm_interval == 0 || i == n {
            let stretch = gram_schmidt(&mut frame);
            for (acc, r) in sums.iter_mut().zip(stretch) {
                if !(r > 0.0 && r.is_finite()) {
                    return Err(Error::DegenerateTangent { iteration: burn_in + i });
                }
                *acc += r.ln();
            }
        }
    }

    let mut exponents: Vec<f64> = sums.iter().map(|v| v / n as f64).collect();
    exponents.sort_by(|a, b| b.total_cmp(a));
    Ok(LyapunovSpectrum {
        exponents,
        iterations: n,
        renorm_interval,
    })
}

/// Lyapunov spectrum for either map. `seed` must belong to the same map as
/// `params`.
pub fn lyapunov_spectrum(
    params: &MapParams,
    seed: &MapState,
    burn_in: usize,
    n: usize,
    renorm_interval: usize,
) -> Result<LyapunovSpectrum> {
    match (params, seed) {
        (MapParams::Hyper3D(p), MapState::Hyper3D(s)) => {
            lyapunov_spectrum_of(p, (*s).into(), burn_in, n, renorm_interval)
        }
        (MapParams::Mem2D(p), MapState::Mem2D(s)) => {
            lyapunov_spectrum_of(p, (*s).into(), burn_in, n, renorm_interval)
        }
        _ => Err(Error::InvalidArgument(format!(
            "seed state is for the {} map but parameters are for the {} map",
            seed.map_id(),
            params.map_id()
        ))),
    }
}
