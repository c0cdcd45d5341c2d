//! Salient-frame selection by mean absolute difference against the last
//! retained frame, and a reader for concatenated binary PGM (P5) streams.

use crate::error::{Error, Result};

/// Default selection threshold: 2% mean intensity change.
pub const DEFAULT_TAU: f64 = 0.02;

/// An 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayFrame {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayFrame {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        let expected = width * height;
        if width == 0 || height == 0 || pixels.len() != expected {
            return Err(Error::PixelCount {
                expected,
                found: pixels.len(),
            });
        }
        Ok(GrayFrame {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        GrayFrame {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Mean absolute pixel difference scaled to [0, 1].
    pub fn difference(&self, other: &GrayFrame) -> f64 {
        let total: u64 = self
            .pixels
            .iter()
            .zip(&other.pixels)
            .map(|(&a, &b)| u64::from(a.abs_diff(b)))
            .sum();
        total as f64 / (self.pixels.len() as f64 * 255.0)
    }

    /// Binary PGM encoding with maxval 255.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

/// Indices of frames that differ from the most recently selected frame by
/// more than `tau`. Frame 0 is always selected.
pub fn select_salient(frames: &[GrayFrame], tau: f64) -> Result<Vec<usize>> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::InvalidThreshold(tau));
    }
    let first = frames.first().ok_or(Error::NoFrames)?;
    for (index, frame) in frames.iter().enumerate() {
        if frame.width != first.width || frame.height != first.height {
            return Err(Error::DimensionMismatch {
                index,
                expected_w: first.width,
                expected_h: first.height,
                found_w: frame.width,
                found_h: frame.height,
            });
        }
    }

    let mut selected = vec![0];
    let mut reference = first;
    for (index, frame) in frames.iter().enumerate().skip(1) {
        if frame.difference(reference) > tau {
            selected.push(index);
            reference = frame;
        }
    }
    Ok(selected)
}

/// Reads every image of a concatenated P5 stream. 16-bit rasters and
/// maxvals other than 255 are rescaled to 0..=255.
pub fn read_pgm_stream(bytes: &[u8]) -> Result<Vec<GrayFrame>> {
    let mut reader = PgmReader { bytes, pos: 0 };
    let mut frames = Vec::new();
    loop {
        reader.skip_space_and_comments();
        if reader.pos >= bytes.len() {
            break;
        }
        frames.push(reader.frame()?);
    }
    Ok(frames)
}

struct PgmReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl PgmReader<'_> {
    fn fail<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(Error::Pgm {
            offset: self.pos,
            reason: reason.into(),
        })
    }

    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&b| b != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected a decimal number");
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map_or_else(|| self.fail("number out of range"), Ok)
    }

    fn frame(&mut self) -> Result<GrayFrame> {
        if !self.bytes[self.pos..].starts_with(b"P5") {
            return self.fail("expected P5 magic");
        }
        self.pos += 2;
        let width = self.number()?;
        let height = self.number()?;
        let maxval = self.number()?;
        if width == 0 || height == 0 {
            return self.fail("zero image dimension");
        }
        if maxval == 0 || maxval > 65535 {
            return self.fail(format!("maxval {maxval} outside 1..=65535"));
        }
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => self.pos += 1,
            _ => return self.fail("expected whitespace before raster"),
        }

        let count = width * height;
        let sample_bytes = if maxval < 256 { 1 } else { 2 };
        let end = self.pos + count * sample_bytes;
        if end > self.bytes.len() {
            return self.fail(format!("raster truncated, need {} bytes", count * sample_bytes));
        }
        let raster = &self.bytes[self.pos..end];
        self.pos = end;

        let scale = |v: usize| -> u8 {
            let v = v.min(maxval);
            ((v * 255 + maxval / 2) / maxval) as u8
        };
        let pixels = if sample_bytes == 1 {
            raster.iter().map(|&v| scale(usize::from(v))).collect()
        } else {
            raster
                .chunks_exact(2)
                .map(|pair| scale(usize::from(u16::from_be_bytes([pair[0], pair[1]]))))
                .collect()
        };
        GrayFrame::new(width, height, pixels)
    }
}
