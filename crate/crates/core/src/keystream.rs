//! Orbit → keystream bytes.
//!
//! Raw map states are not confined to [0, 1), so each state component is
//! first reduced with [`normalize_state`] (fractional part of |v|·10⁶) and
//! then quantized as ⌊u·255⌋. The factor 255 means byte value 255 never
//! appears in a keystream; the cipher output is still uniform because the
//! streams are combined through three modular stages.

use crate::keys::DerivedConfig;
use crate::maps::{orbit2, orbit3, MapParams, MapState, Orbit2, Orbit3};
use crate::{Error, Result};

const DIGIT_SCALE: f64 = 1e6;

/// Maps a finite real to [0, 1) as frac(|v|·10⁶).
#[inline]
pub fn normalize_state(v: f64) -> f64 {
    (v.abs() * DIGIT_SCALE).fract()
}

#[inline]
pub fn quantize(u: f64) -> u8 {
    (u * 255.0).floor() as u8
}

#[inline]
pub fn keystream_byte(v: f64) -> u8 {
    quantize(normalize_state(v))
}

/// Per-sample key bytes. All present streams have the same length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Keystream {
    /// Streams from the x, y, z sequences of the 3D map.
    Hyper3D { kx: Vec<u8>, ky: Vec<u8>, kz: Vec<u8> },
    /// Streams from the x, q sequences of the 2D map.
    Mem2D { kx: Vec<u8>, kq: Vec<u8> },
}

impl Keystream {
    pub fn len(&self) -> usize {
        match self {
            Keystream::Hyper3D { kx, .. } | Keystream::Mem2D { kx, .. } => kx.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All streams laid end to end, in declaration order. Used for dumping
    /// test vectors.
    pub fn to_bytes(&self) -> Vec<u8> {
        match self {
            Keystream::Hyper3D { kx, ky, kz } => [kx.as_slice(), ky, kz].concat(),
            Keystream::Mem2D { kx, kq } => [kx.as_slice(), kq].concat(),
        }
    }
}

fn check_length(available: usize, needed: usize) -> Result<()> {
    if available < needed {
        Err(Error::InsufficientOrbit { needed, available })
    } else {
        Ok(())
    }
}

pub fn keystream_from_orbit3(orbit: &Orbit3, n_pixels: usize) -> Result<Keystream> {
    check_length(orbit.len(), n_pixels)?;
    let states = &orbit.states[..n_pixels];
    Ok(Keystream::Hyper3D {
        kx: states.iter().map(|s| keystream_byte(s.x)).collect(),
        ky: states.iter().map(|s| keystream_byte(s.y)).collect(),
        kz: states.iter().map(|s| keystream_byte(s.z)).collect(),
    })
}

pub fn keystream_from_orbit2(orbit: &Orbit2, n_values: usize) -> Result<Keystream> {
    check_length(orbit.len(), n_values)?;
    let states = &orbit.states[..n_values];
    Ok(Keystream::Mem2D {
        kx: states.iter().map(|s| keystream_byte(s.x)).collect(),
        kq: states.iter().map(|s| keystream_byte(s.q)).collect(),
    })
}

/// Runs the orbit described by `cfg` and extracts `n` keystream samples.
pub fn keystream_for_config(cfg: &DerivedConfig, n: usize) -> Result<Keystream> {
    if n == 0 {
        return Err(Error::InvalidArgument("keystream length must be at least 1".into()));
    }
    match (&cfg.params, &cfg.seed) {
        (MapParams::Hyper3D(p), MapState::Hyper3D(s)) => {
            keystream_from_orbit3(&orbit3(*s, p, cfg.burn_in, n)?, n)
        }
        (MapParams::Mem2D(p), MapState::Mem2D(s)) => {
            keystream_from_orbit2(&orbit2(*s, p, cfg.burn_in, n)?, n)
        }
        _ => Err(Error::InvalidArgument("config seed and parameters belong to different maps".into())),
    }
}
