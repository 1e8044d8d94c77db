use super::{to_u8, GrayImage};
use crate::error::{invalid, Result};

/// Locally adaptive Wiener (Lee) filter.
///
/// With local mean `mu` and variance `var` over a `window x window`
/// neighborhood and noise power `nu2` taken as the mean local variance:
/// `out = mu + max(var - nu2, 0) / max(var, eps) * (in - mu)`.
pub fn wiener_local(img: &GrayImage, window: usize) -> Result<GrayImage> {
    if window < 3 || window % 2 == 0 {
        return invalid(format!("wiener window must be odd and >= 3, got {window}"));
    }
    let r = (window / 2) as isize;
    let n = (window * window) as f64;
    let (w, h) = (img.width(), img.height());
    let mut mean = Vec::with_capacity(w * h);
    let mut var = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (mut s, mut s2) = (0.0, 0.0);
            for dy in -r..=r {
                for dx in -r..=r {
                    let v = img.get_clamped(x as isize + dx, y as isize + dy) as f64;
                    s += v;
                    s2 += v * v;
                }
            }
            let mu = s / n;
            mean.push(mu);
            var.push((s2 / n - mu * mu).max(0.0));
        }
    }
    let noise = var.iter().sum::<f64>() / var.len().max(1) as f64;
    let pixels = img
        .pixels()
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let gain = (var[i] - noise).max(0.0) / var[i].max(f64::EPSILON);
            to_u8(mean[i] + gain * (p as f64 - mean[i]))
        })
        .collect();
    GrayImage::new(w, h, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_unchanged() {
        let img = GrayImage::filled(9, 7, 93);
        assert_eq!(wiener_local(&img, 3).unwrap(), img);
        assert!(wiener_local(&img, 4).is_err());
        assert!(wiener_local(&img, 1).is_err());
    }

    #[test]
    fn strong_edge_mostly_kept() {
        // a lone step edge in a large flat image: local variance at the edge
        // is far above the image-wide mean variance, so gain stays near 1
        let img = GrayImage::from_fn(64, 64, |x, _| if x < 32 { 40 } else { 200 });
        let out = wiener_local(&img, 3).unwrap();
        for y in 0..64 {
            assert!((out.get(31, y) as i32 - 40).abs() <= 12);
            assert!((out.get(32, y) as i32 - 200).abs() <= 12);
        }
    }
}
