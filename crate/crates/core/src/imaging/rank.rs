use super::GrayImage;
use crate::error::{invalid, Result};

fn window(img: &GrayImage, x: usize, y: usize, radius: usize, buf: &mut Vec<u8>) {
    buf.clear();
    let r = radius as isize;
    for dy in -r..=r {
        for dx in -r..=r {
            buf.push(img.get_clamped(x as isize + dx, y as isize + dy));
        }
    }
}

fn check_radius(radius: usize) -> Result<()> {
    if radius == 0 {
        return invalid("filter radius must be at least 1");
    }
    Ok(())
}

/// Median of the `(2m+1) x (2m+1)` neighborhood.
pub fn median_filter(img: &GrayImage, radius: usize) -> Result<GrayImage> {
    check_radius(radius)?;
    let mut buf = Vec::new();
    let mut out = Vec::with_capacity(img.pixels().len());
    for y in 0..img.height() {
        for x in 0..img.width() {
            window(img, x, y, radius, &mut buf);
            let mid = buf.len() / 2;
            out.push(*buf.select_nth_unstable(mid).1);
        }
    }
    GrayImage::new(img.width(), img.height(), out)
}

/// Most frequent value of the `(2m+1) x (2m+1)` neighborhood.
///
/// When several values share the top count the center pixel is kept.
pub fn majority_filter(img: &GrayImage, radius: usize) -> Result<GrayImage> {
    check_radius(radius)?;
    let mut buf = Vec::new();
    let mut out = Vec::with_capacity(img.pixels().len());
    let mut counts = [0u32; 256];
    for y in 0..img.height() {
        for x in 0..img.width() {
            window(img, x, y, radius, &mut buf);
            for &v in &buf {
                counts[v as usize] += 1;
            }
            let mut best = 0u32;
            let mut best_val = 0u8;
            let mut tied = false;
            for &v in &buf {
                let c = counts[v as usize];
                if c > best {
                    best = c;
                    best_val = v;
                    tied = false;
                } else if c == best && v != best_val {
                    tied = true;
                }
            }
            let center = img.get(x, y);
            out.push(if tied { center } else { best_val });
            for &v in &buf {
                counts[v as usize] = 0;
            }
        }
    }
    GrayImage::new(img.width(), img.height(), out)
}
