//! Binary PGM (P5) / PPM (P6) codec with maxval 255, plus grayscale
//! conversion and nearest-neighbour resizing.
//!
//! Written headers are `P5 <w> <h> 255\n` (or `P6 ...`), with no comments,
//! so output is byte-deterministic. Comment lines are accepted on read.

use std::fs;
use std::path::Path;

use crate::{Error, ImageBuffer, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    PgmP5,
    PpmP6,
}

impl ImageFormat {
    pub fn channels(self) -> usize {
        match self {
            ImageFormat::PgmP5 => 1,
            ImageFormat::PpmP6 => 3,
        }
    }

    fn magic(self) -> &'static str {
        match self {
            ImageFormat::PgmP5 => "P5",
            ImageFormat::PpmP6 => "P6",
        }
    }

    pub fn for_channels(channels: usize) -> Result<Self> {
        match channels {
            1 => Ok(ImageFormat::PgmP5),
            3 => Ok(ImageFormat::PpmP6),
            n => Err(Error::UnsupportedFormat(format!("no netpbm format for {n} channels"))),
        }
    }
}

/// Header tokenizer over the raw file bytes.
struct Header<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while self.data.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedHeader(format!("expected {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::MalformedHeader(format!("{what} out of range")))
    }
}

/// Parses a P5/P6 file image from memory.
pub fn decode(data: &[u8]) -> Result<ImageBuffer> {
    let format = match data.get(..2) {
        Some(b"P5") => ImageFormat::PgmP5,
        Some(b"P6") => ImageFormat::PpmP6,
        Some([b'P', d]) if d.is_ascii_digit() => {
            return Err(Error::UnsupportedFormat(format!(
                "netpbm variant P{} (only binary P5/P6 are supported)",
                *d as char
            )))
        }
        _ => return Err(Error::MalformedHeader("missing P5/P6 magic number".into())),
    };
    let mut h = Header { data, pos: 2 };
    if !h.data.get(h.pos).is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(Error::MalformedHeader("no separator after magic number".into()));
    }
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if maxval != 255 {
        return Err(Error::UnsupportedFormat(format!("maxval {maxval} (only 255 is supported)")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match h.data.get(h.pos) {
        Some(b) if b.is_ascii_whitespace() => h.pos += 1,
        _ => return Err(Error::MalformedHeader("no whitespace after maxval".into())),
    }
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!("empty image {width}x{height}")));
    }
    let channels = format.channels();
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| Error::MalformedHeader("dimensions overflow".into()))?;
    let raster = &data[h.pos..];
    if raster.len() < expected {
        return Err(Error::TruncatedPixelData { expected, found: raster.len() });
    }
    ImageBuffer::new(width, height, channels, raster[..expected].to_vec())
}

/// Serializes to P5 (1 channel) or P6 (3 channels).
pub fn encode(img: &ImageBuffer) -> Result<Vec<u8>> {
    if img.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "cannot encode an empty {}x{} image",
            img.width(),
            img.height()
        )));
    }
    let format = ImageFormat::for_channels(img.channels())?;
    let header = format!("{} {} {} 255\n", format.magic(), img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.pixels());
    Ok(out)
}

pub fn load(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    decode(&fs::read(path)?)
}

pub fn save(img: &ImageBuffer, path: impl AsRef<Path>) -> Result<()> {
    let bytes = encode(img)?;
    fs::write(path, bytes)?;
    Ok(())
}

/// BT.601 luma, rounded. Single-channel input is returned unchanged.
pub fn to_grayscale(img: &ImageBuffer) -> ImageBuffer {
    if img.channels() == 1 {
        return img.clone();
    }
    let gray = img
        .pixels()
        .chunks_exact(3)
        .map(|px| {
            let y = 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
            y.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    ImageBuffer::new(img.width(), img.height(), 1, gray).expect("shape preserved")
}

/// Nearest-neighbour resize: output (row, col) samples input
/// (⌊row·h/new_h⌋, ⌊col·w/new_w⌋).
pub fn resize_nearest(img: &ImageBuffer, new_w: usize, new_h: usize) -> Result<ImageBuffer> {
    if new_w == 0 || new_h == 0 {
        return Err(Error::InvalidArgument(format!("target size {new_w}x{new_h} is empty")));
    }
    if img.is_empty() {
        return Err(Error::InvalidArgument("cannot resize an empty image".into()));
    }
    let c = img.channels();
    let mut out = Vec::with_capacity(new_w * new_h * c);
    for row in 0..new_h {
        let src_row = row * img.height() / new_h;
        for col in 0..new_w {
            let src_col = col * img.width() / new_w;
            let i = img.index(src_row, src_col, 0);
            out.extend_from_slice(&img.pixels()[i..i + c]);
        }
    }
    ImageBuffer::new(new_w, new_h, c, out)
}
