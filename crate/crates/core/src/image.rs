//! Pixel planes: the 8-bit grayscale image and the real-valued field the
//! inverse wavelet transform produces.

use crate::error::{Error, Result};

/// An 8-bit grayscale image, row-major. Both dimensions are even and nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, pixels: Vec<u8>) -> Result<Self> {
        check_dims(rows, cols)?;
        if pixels.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} pixels supplied for a {rows}x{cols} image",
                pixels.len()
            )));
        }
        Ok(Self { rows, cols, pixels })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        check_dims(rows, cols)?;
        let mut pixels = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                pixels.push(f(r, c));
            }
        }
        Ok(Self { rows, cols, pixels })
    }

    /// Height (M).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Width (N).
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.cols + col]
    }
}

/// A real-valued M×N plane, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        check_dims(rows, cols)?;
        if values.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} values supplied for a {rows}x{cols} field",
                values.len()
            )));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_image(image: &GrayImage) -> Self {
        Self {
            rows: image.rows,
            cols: image.cols,
            values: image.pixels.iter().map(|&p| f64::from(p)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    /// Round half away from zero, then clamp into [0, 255]. NaN maps to 0.
    pub fn to_image_rounded(&self) -> GrayImage {
        let pixels = self
            .values
            .iter()
            .map(|&v| {
                if v.is_nan() {
                    0
                } else {
                    v.round().clamp(0.0, 255.0) as u8
                }
            })
            .collect();
        GrayImage {
            rows: self.rows,
            cols: self.cols,
            pixels,
        }
    }

    /// Min-max stretch to [0, 255] for display. A flat field maps to 0.
    pub fn to_image_normalized(&self) -> GrayImage {
        let (lo, hi) = self
            .values
            .iter()
            .filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        let span = hi - lo;
        let pixels = self
            .values
            .iter()
            .map(|&v| {
                if !v.is_finite() || span.is_nan() || span <= 0.0 {
                    0
                } else {
                    ((v - lo) / span * 255.0).round().clamp(0.0, 255.0) as u8
                }
            })
            .collect();
        GrayImage {
            rows: self.rows,
            cols: self.cols,
            pixels,
        }
    }
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 || !rows.is_multiple_of(2) || !cols.is_multiple_of(2) {
        return Err(Error::Shape(format!(
            "image dimensions must be positive and even, got {rows}x{cols}"
        )));
    }
    Ok(())
}
