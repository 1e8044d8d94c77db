//! Single-level orthonormal Haar transform and soft-threshold denoising.

use super::{to_u8, GrayImage};

/// Subbands of a one-level 2-D Haar decomposition, each `half_w x half_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarBands {
    pub half_w: usize,
    pub half_h: usize,
    pub ll: Vec<f64>,
    /// Vertical differences (row pairs).
    pub lh: Vec<f64>,
    /// Horizontal differences (column pairs).
    pub hl: Vec<f64>,
    pub hh: Vec<f64>,
}

impl HaarBands {
    fn details_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.lh.iter_mut().chain(self.hl.iter_mut()).chain(self.hh.iter_mut())
    }
}

/// Replicate-pads odd dimensions to even before transforming.
pub fn haar_forward(img: &GrayImage) -> HaarBands {
    let half_w = img.width().div_ceil(2);
    let half_h = img.height().div_ceil(2);
    let n = half_w * half_h;
    let mut bands = HaarBands {
        half_w,
        half_h,
        ll: Vec::with_capacity(n),
        lh: Vec::with_capacity(n),
        hl: Vec::with_capacity(n),
        hh: Vec::with_capacity(n),
    };
    for by in 0..half_h {
        for bx in 0..half_w {
            let (x, y) = (2 * bx as isize, 2 * by as isize);
            let a = img.get_clamped(x, y) as f64;
            let b = img.get_clamped(x + 1, y) as f64;
            let c = img.get_clamped(x, y + 1) as f64;
            let d = img.get_clamped(x + 1, y + 1) as f64;
            bands.ll.push((a + b + c + d) / 2.0);
            bands.hl.push((a - b + c - d) / 2.0);
            bands.lh.push((a + b - c - d) / 2.0);
            bands.hh.push((a - b - c + d) / 2.0);
        }
    }
    bands
}

/// Inverse transform, cropped to `width x height` and rounded into `[0, 255]`.
pub fn haar_inverse(bands: &HaarBands, width: usize, height: usize) -> GrayImage {
    let full_w = 2 * bands.half_w;
    let mut full = vec![0.0; full_w * 2 * bands.half_h];
    for by in 0..bands.half_h {
        for bx in 0..bands.half_w {
            let i = by * bands.half_w + bx;
            let (ll, lh, hl, hh) = (bands.ll[i], bands.lh[i], bands.hl[i], bands.hh[i]);
            let (x, y) = (2 * bx, 2 * by);
            full[y * full_w + x] = (ll + hl + lh + hh) / 2.0;
            full[y * full_w + x + 1] = (ll - hl + lh - hh) / 2.0;
            full[(y + 1) * full_w + x] = (ll + hl - lh - hh) / 2.0;
            full[(y + 1) * full_w + x + 1] = (ll - hl - lh + hh) / 2.0;
        }
    }
    GrayImage::from_fn(width, height, |x, y| to_u8(full[y * full_w + x]))
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Robust noise standard deviation, `median(|HH|) / 0.6745`.
pub fn mad_sigma(img: &GrayImage) -> f64 {
    let bands = haar_forward(img);
    median(bands.hh.iter().map(|v| v.abs()).collect()) / 0.6745
}

fn soft(v: f64, t: f64) -> f64 {
    v.signum() * (v.abs() - t).max(0.0)
}

/// One-level Haar denoising with the universal soft threshold
/// `sigma * sqrt(2 ln n)` applied to the three detail subbands.
pub fn wavelet_denoise(img: &GrayImage) -> GrayImage {
    let mut bands = haar_forward(img);
    let sigma = median(bands.hh.iter().map(|v| v.abs()).collect()) / 0.6745;
    let n = (4 * bands.half_w * bands.half_h).max(2) as f64;
    let t = sigma * (2.0 * n.ln()).sqrt();
    for v in bands.details_mut() {
        *v = soft(*v, t);
    }
    haar_inverse(&bands, img.width(), img.height())
}
