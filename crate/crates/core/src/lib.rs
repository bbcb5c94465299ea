//! Keystream image encryption driven by two discrete chaotic maps.
//!
//! The crate covers the whole pipeline:
//!
//! - [`maps`]: the 3D hyperchaotic map and the 2D memristor map, their
//!   Jacobians, orbit generation, Lyapunov spectra and bifurcation sweeps.
//! - [`keys`]: hex keys from the OS random source and the deterministic
//!   key → (parameters, initial condition) derivation.
//! - [`keystream`]: orbit → per-sample key bytes.
//! - [`cipher`]: the XOR / add / subtract byte pipelines and their inverses.
//! - [`imageio`]: binary PGM/PPM codec, grayscale conversion, resizing.
//! - [`analysis`]: entropy, correlation, histogram, MSE/SSIM/PSNR,
//!   NPCR/UACI and the noise and key-sensitivity experiments.

pub mod analysis;
pub mod buffer;
pub mod cipher;
mod error;
pub mod imageio;
pub mod keys;
pub mod keystream;
pub mod maps;

pub use buffer::ImageBuffer;
pub use cipher::{decrypt_with_key, encrypt_with_key, CipherMode};
pub use error::{Error, Result};
pub use keys::{derive_config, generate_key, key_from_seed, ChaoticKey, DerivedConfig};
pub use keystream::Keystream;
pub use maps::{Hyper3DParams, MapId, Mem2DParams, State2, State3};
