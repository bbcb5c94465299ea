use crate::{Error, Result};

/// Row-major, channel-interleaved 8-bit image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    channels: usize,
    pixels: Vec<u8>,
}

impl ImageBuffer {
    /// `channels` must be 1 (grayscale) or 3 (RGB) and `pixels` must hold
    /// exactly `width * height * channels` bytes.
    pub fn new(width: usize, height: usize, channels: usize, pixels: Vec<u8>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidArgument(format!("channels must be 1 or 3, got {channels}")));
        }
        let expected = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(channels))
            .ok_or_else(|| Error::InvalidArgument("image dimensions overflow".into()))?;
        if pixels.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "{width}x{height}x{channels} image needs {expected} bytes, got {}",
                pixels.len()
            )));
        }
        Ok(ImageBuffer { width, height, channels, pixels })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: u8) -> Result<Self> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    /// Number of byte samples (width × height × channels).
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn same_shape(&self, other: &ImageBuffer) -> bool {
        (self.width, self.height, self.channels) == (other.width, other.height, other.channels)
    }

    /// Flat index of a sample: ((row·width) + col)·channels + channel.
    #[inline]
    pub fn index(&self, row: usize, col: usize, channel: usize) -> usize {
        (row * self.width + col) * self.channels + channel
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, channel: usize) -> u8 {
        self.pixels[self.index(row, col, channel)]
    }

    /// Same shape, new sample bytes.
    pub fn with_pixels(&self, pixels: Vec<u8>) -> Result<Self> {
        Self::new(self.width, self.height, self.channels, pixels)
    }

    /// One channel as a single-channel image.
    pub fn channel(&self, c: usize) -> Result<Self> {
        if c >= self.channels {
            return Err(Error::InvalidArgument(format!("channel {c} out of range")));
        }
        let pixels = self.pixels.iter().skip(c).step_by(self.channels).copied().collect();
        Self::new(self.width, self.height, 1, pixels)
    }
}
