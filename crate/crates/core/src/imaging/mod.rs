//! Grayscale images: PGM I/O, pixel/bit conversion, quality metrics and
//! enhancement filters.
//!
//! All windowed filters treat out-of-image positions by replicating the
//! nearest border pixel.

mod morphology;
mod nlm;
pub mod pgm;
mod rank;
mod wavelet;
mod wiener;

pub use morphology::{close, dilate, erode, open, StructuringElement};
pub use nlm::{nlm_denoise, NlmParams};
pub use pgm::{read_pgm, write_pgm};
pub use rank::{majority_filter, median_filter};
pub use wavelet::{haar_forward, haar_inverse, mad_sigma, wavelet_denoise, HaarBands};
pub use wiener::wiener_local;

use crate::bits;
use crate::error::{invalid, Result};

/// 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return invalid(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            ));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            pixels,
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

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Pixel at `(x, y)` with coordinates clamped into the image.
    pub fn get_clamped(&self, x: isize, y: isize) -> u8 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.pixels[cy * self.width + cx]
    }

    pub fn same_dims(&self, other: &GrayImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// `255 - p` for every pixel.
    pub fn complement(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|p| 255 - p).collect(),
        }
    }

    /// Binary black-and-white test card: a filled disc, two rectangles and a
    /// thick ring on a black background.
    pub fn test_pattern(width: usize, height: usize) -> GrayImage {
        let (w, h) = (width as f64, height as f64);
        GrayImage::from_fn(width, height, |x, y| {
            let (fx, fy) = (x as f64 + 0.5, y as f64 + 0.5);
            let disc = (fx - 0.3 * w).powi(2) + (fy - 0.3 * h).powi(2) < (0.18 * w.min(h)).powi(2);
            let rect_a = fx > 0.58 * w && fx < 0.9 * w && fy > 0.12 * h && fy < 0.42 * h;
            let rect_b = fx > 0.1 * w && fx < 0.45 * w && fy > 0.62 * h && fy < 0.88 * h;
            let r2 = (fx - 0.72 * w).powi(2) + (fy - 0.72 * h).powi(2);
            let ring = r2 < (0.17 * w.min(h)).powi(2) && r2 > (0.08 * w.min(h)).powi(2);
            if disc || rect_a || rect_b || ring {
                255
            } else {
                0
            }
        })
    }
}

/// Eight bits per pixel, MSB first, row-major.
pub fn pixels_to_bits(img: &GrayImage) -> Vec<bool> {
    let mut out = Vec::with_capacity(img.pixels.len() * 8);
    for &p in &img.pixels {
        bits::push_index(&mut out, p as usize, 8);
    }
    out
}

pub fn bits_to_pixels(stream: &[bool], width: usize, height: usize) -> Result<GrayImage> {
    if stream.len() != 8 * width * height {
        return invalid(format!(
            "{} bits cannot fill a {width}x{height} image",
            stream.len()
        ));
    }
    let pixels = stream
        .chunks_exact(8)
        .map(|byte| bits::to_index(byte) as u8)
        .collect();
    GrayImage::new(width, height, pixels)
}

/// Zero-pads the stream to a multiple of `eta`. Returns the pad length.
pub fn pad_bits(stream: &mut Vec<bool>, eta: usize) -> usize {
    let pad = (eta - stream.len() % eta) % eta;
    stream.resize(stream.len() + pad, false);
    pad
}

pub fn unpad_bits(stream: &mut Vec<bool>, pad: usize) {
    stream.truncate(stream.len().saturating_sub(pad));
}

pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    if !a.same_dims(b) {
        return invalid("image dimensions differ");
    }
    let sum: f64 = a
        .pixels
        .iter()
        .zip(&b.pixels)
        .map(|(&p, &q)| {
            let d = p as f64 - q as f64;
            d * d
        })
        .sum();
    Ok(sum / a.pixels.len().max(1) as f64)
}

/// Peak signal-to-noise ratio in dB; `+inf` for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    let m = mse(a, b)?;
    Ok(if m == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0 * 255.0 / m).log10()
    })
}

pub(crate) fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Enhancement filters selectable at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum Filter {
    Median { radius: usize },
    Majority { radius: usize },
    /// Opening followed by closing.
    Morph { element: StructuringElement },
    Wiener { window: usize },
    Wavelet,
    Nlm(NlmParams),
    /// Median, then majority, then closing.
    Pipeline { radius: usize, element: StructuringElement },
}

impl Filter {
    pub fn name(&self) -> &'static str {
        match self {
            Filter::Median { .. } => "median",
            Filter::Majority { .. } => "majority",
            Filter::Morph { .. } => "morph",
            Filter::Wiener { .. } => "wiener",
            Filter::Wavelet => "wavelet",
            Filter::Nlm(_) => "nlm",
            Filter::Pipeline { .. } => "pipeline",
        }
    }

    pub fn apply(&self, img: &GrayImage) -> Result<GrayImage> {
        Ok(match self {
            Filter::Median { radius } => median_filter(img, *radius)?,
            Filter::Majority { radius } => majority_filter(img, *radius)?,
            Filter::Morph { element } => close(&open(img, element), element),
            Filter::Wiener { window } => wiener_local(img, *window)?,
            Filter::Wavelet => wavelet_denoise(img),
            Filter::Nlm(params) => nlm_denoise(img, params)?,
            Filter::Pipeline { radius, element } => {
                let m = median_filter(img, *radius)?;
                close(&majority_filter(&m, *radius)?, element)
            }
        })
    }
}
