use rayon::prelude::*;

use super::{to_u8, wavelet::mad_sigma, GrayImage};
use crate::error::{invalid, Result};

/// Non-local means parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlmParams {
    /// Patch half-size; 1 gives 3x3 patches.
    pub patch_radius: usize,
    /// Search window half-size; 5 gives an 11x11 window.
    pub search_radius: usize,
    /// Filtering strength.
    pub h: f64,
}

impl Default for NlmParams {
    fn default() -> Self {
        Self {
            patch_radius: 1,
            search_radius: 5,
            h: 10.0,
        }
    }
}

/// Non-local means with flat (unweighted) patch distances.
///
/// Each pixel becomes the weighted mean of the search-window pixels, with
/// weight `exp(-max(d2 - 2 nu2, 0) / h^2)` where `d2` is the mean squared
/// difference between the two patches and `nu2` is the MAD noise estimate.
/// The center pixel enters with weight 1.
pub fn nlm_denoise(img: &GrayImage, params: &NlmParams) -> Result<GrayImage> {
    if !(params.h > 0.0) {
        return invalid(format!("nlm strength must be positive, got {}", params.h));
    }
    let nu = mad_sigma(img);
    let offset = 2.0 * nu * nu;
    let h2 = params.h * params.h;
    let p = params.patch_radius as isize;
    let s = params.search_radius as isize;
    let patch_len = ((2 * p + 1) * (2 * p + 1)) as f64;
    let (w, h) = (img.width(), img.height());

    let patch_dist = |x0: isize, y0: isize, x1: isize, y1: isize| -> f64 {
        let mut acc = 0.0;
        for dy in -p..=p {
            for dx in -p..=p {
                let d = img.get_clamped(x0 + dx, y0 + dy) as f64 - img.get_clamped(x1 + dx, y1 + dy) as f64;
                acc += d * d;
            }
        }
        acc / patch_len
    };

    let mut pixels = vec![0u8; w * h];
    pixels.par_chunks_mut(w.max(1)).enumerate().for_each(|(y, row)| {
        let y = y as isize;
        for (x, out) in row.iter_mut().enumerate() {
            let x = x as isize;
            let (mut num, mut den) = (0.0, 0.0);
            for sy in (y - s).max(0)..=(y + s).min(h as isize - 1) {
                for sx in (x - s).max(0)..=(x + s).min(w as isize - 1) {
                    let weight = if sx == x && sy == y {
                        1.0
                    } else {
                        let d2 = patch_dist(x, y, sx, sy);
                        (-(d2 - offset).max(0.0) / h2).exp()
                    };
                    num += weight * img.get(sx as usize, sy as usize) as f64;
                    den += weight;
                }
            }
            *out = to_u8(num / den);
        }
    });
    GrayImage::new(w, h, pixels)
}
