//! The two keystream pipelines and their exact inverses.
//!
//! For flat sample index `t`:
//!
//! ```text
//! 3D:  E = ((P ⊕ kx) + ky − kz) mod 256      P = ((E + kz − ky) mod 256) ⊕ kx
//! 2D:  E = ((P ⊕ kx) + kq) mod 256           P = ((E − kq) mod 256) ⊕ kx
//! ```
//!
//! Each stage is reduced mod 256 on its own, so every stage is a bijection on
//! bytes. There is no header, MAC or chaining: this is a plain stream cipher
//! and a changed plaintext byte changes exactly one ciphertext byte.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::keys::{derive_config, ChaoticKey, DerivedConfig};
use crate::keystream::{keystream_for_config, Keystream};
use crate::maps::MapId;
use crate::{Error, ImageBuffer, Result};

/// Which pipeline to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CipherMode {
    #[serde(rename = "3d")]
    Hyper3D,
    #[serde(rename = "2d")]
    Mem2D,
}

impl CipherMode {
    pub fn map_id(self) -> MapId {
        match self {
            CipherMode::Hyper3D => MapId::Hyper3D,
            CipherMode::Mem2D => MapId::Mem2D,
        }
    }

    /// Grayscale images use the 3D map, color images the 2D map.
    pub fn default_for(img: &ImageBuffer) -> Self {
        if img.channels() == 1 {
            CipherMode::Hyper3D
        } else {
            CipherMode::Mem2D
        }
    }
}

impl From<MapId> for CipherMode {
    fn from(m: MapId) -> Self {
        match m {
            MapId::Hyper3D => CipherMode::Hyper3D,
            MapId::Mem2D => CipherMode::Mem2D,
        }
    }
}

impl fmt::Display for CipherMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.map_id().fmt(f)
    }
}

impl FromStr for CipherMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<MapId>().map(CipherMode::from)
    }
}

#[inline]
pub fn encrypt3_byte(p: u8, kx: u8, ky: u8, kz: u8) -> u8 {
    (p ^ kx).wrapping_add(ky).wrapping_sub(kz)
}

#[inline]
pub fn decrypt3_byte(e: u8, kx: u8, ky: u8, kz: u8) -> u8 {
    e.wrapping_add(kz).wrapping_sub(ky) ^ kx
}

#[inline]
pub fn encrypt2_byte(p: u8, kx: u8, kq: u8) -> u8 {
    (p ^ kx).wrapping_add(kq)
}

#[inline]
pub fn decrypt2_byte(e: u8, kx: u8, kq: u8) -> u8 {
    e.wrapping_sub(kq) ^ kx
}

fn check_len(img: &ImageBuffer, ks: &Keystream) -> Result<()> {
    if img.len() != ks.len() {
        return Err(Error::KeystreamMismatch(format!(
            "image has {} samples, keystream has {}",
            img.len(),
            ks.len()
        )));
    }
    Ok(())
}

fn apply3(img: &ImageBuffer, ks: &Keystream, f: fn(u8, u8, u8, u8) -> u8) -> Result<ImageBuffer> {
    check_len(img, ks)?;
    let Keystream::Hyper3D { kx, ky, kz } = ks else {
        return Err(Error::KeystreamMismatch("3D pipeline needs an x/y/z keystream".into()));
    };
    let out = img
        .pixels()
        .iter()
        .zip(kx)
        .zip(ky)
        .zip(kz)
        .map(|(((&p, &x), &y), &z)| f(p, x, y, z))
        .collect();
    img.with_pixels(out)
}

fn apply2(img: &ImageBuffer, ks: &Keystream, f: fn(u8, u8, u8) -> u8) -> Result<ImageBuffer> {
    check_len(img, ks)?;
    let Keystream::Mem2D { kx, kq } = ks else {
        return Err(Error::KeystreamMismatch("2D pipeline needs an x/q keystream".into()));
    };
    let out = img
        .pixels()
        .iter()
        .zip(kx)
        .zip(kq)
        .map(|((&p, &x), &q)| f(p, x, q))
        .collect();
    img.with_pixels(out)
}

pub fn encrypt3(plain: &ImageBuffer, ks: &Keystream) -> Result<ImageBuffer> {
    apply3(plain, ks, encrypt3_byte)
}

pub fn decrypt3(cipher: &ImageBuffer, ks: &Keystream) -> Result<ImageBuffer> {
    apply3(cipher, ks, decrypt3_byte)
}

pub fn encrypt2(plain: &ImageBuffer, ks: &Keystream) -> Result<ImageBuffer> {
    apply2(plain, ks, encrypt2_byte)
}

pub fn decrypt2(cipher: &ImageBuffer, ks: &Keystream) -> Result<ImageBuffer> {
    apply2(cipher, ks, decrypt2_byte)
}

fn keystream_for(img: &ImageBuffer, cfg: &DerivedConfig) -> Result<Keystream> {
    if img.is_empty() {
        return Err(Error::InvalidArgument("cannot process an empty image".into()));
    }
    keystream_for_config(cfg, img.len())
}

/// Encrypts with an explicit map configuration; the pipeline follows the
/// configuration's map.
pub fn encrypt_with_config(plain: &ImageBuffer, cfg: &DerivedConfig) -> Result<ImageBuffer> {
    let ks = keystream_for(plain, cfg)?;
    match cfg.map_id() {
        MapId::Hyper3D => encrypt3(plain, &ks),
        MapId::Mem2D => encrypt2(plain, &ks),
    }
}

pub fn decrypt_with_config(cipher: &ImageBuffer, cfg: &DerivedConfig) -> Result<ImageBuffer> {
    let ks = keystream_for(cipher, cfg)?;
    match cfg.map_id() {
        MapId::Hyper3D => decrypt3(cipher, &ks),
        MapId::Mem2D => decrypt2(cipher, &ks),
    }
}

pub fn encrypt_with_key(plain: &ImageBuffer, key: &ChaoticKey, mode: CipherMode) -> Result<ImageBuffer> {
    encrypt_with_config(plain, &derive_config(key, mode.map_id())?)
}

pub fn decrypt_with_key(cipher: &ImageBuffer, key: &ChaoticKey, mode: CipherMode) -> Result<ImageBuffer> {
    decrypt_with_config(cipher, &derive_config(key, mode.map_id())?)
}
