//! Flat grayscale morphology.
//!
//! Erosion is the neighborhood minimum and dilation the neighborhood maximum
//! over the structuring element. Element positions falling outside the image
//! are skipped; for box-shaped elements this is the same as replicating the
//! border, and it keeps erosion and dilation adjoint for any symmetric element
//! so that opening and closing stay idempotent.

use super::GrayImage;
use crate::error::{invalid, Result};

/// Flat structuring element given as offsets from its origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuringElement {
    offsets: Vec<(isize, isize)>,
}

impl StructuringElement {
    /// `(2r+1) x (2r+1)` square.
    pub fn square(radius: usize) -> Self {
        let r = radius as isize;
        let offsets = (-r..=r)
            .flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)))
            .collect();
        Self { offsets }
    }

    /// Plus-shaped element with arms of length `radius`.
    pub fn cross(radius: usize) -> Self {
        let r = radius as isize;
        let mut offsets = vec![(0, 0)];
        for d in 1..=r {
            offsets.extend([(d, 0), (-d, 0), (0, d), (0, -d)]);
        }
        Self { offsets }
    }

    /// Element from a row-major boolean mask of odd dimensions, centered.
    pub fn from_mask(width: usize, height: usize, mask: &[bool]) -> Result<Self> {
        if width % 2 == 0 || height % 2 == 0 || mask.len() != width * height {
            return invalid("structuring element mask must have odd dimensions");
        }
        let (cx, cy) = ((width / 2) as isize, (height / 2) as isize);
        let offsets: Vec<_> = mask
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(i, _)| ((i % width) as isize - cx, (i / width) as isize - cy))
            .collect();
        if offsets.is_empty() {
            return invalid("structuring element is empty");
        }
        Ok(Self { offsets })
    }

    pub fn offsets(&self) -> &[(isize, isize)] {
        &self.offsets
    }

    fn reflected(&self) -> Self {
        Self {
            offsets: self.offsets.iter().map(|&(x, y)| (-x, -y)).collect(),
        }
    }
}

impl Default for StructuringElement {
    fn default() -> Self {
        Self::square(1)
    }
}

fn rank_op(img: &GrayImage, se: &StructuringElement, init: u8, pick: fn(u8, u8) -> u8) -> GrayImage {
    let (w, h) = (img.width() as isize, img.height() as isize);
    GrayImage::from_fn(img.width(), img.height(), |x, y| {
        let mut acc = init;
        for &(dx, dy) in se.offsets() {
            let (sx, sy) = (x as isize + dx, y as isize + dy);
            if sx >= 0 && sx < w && sy >= 0 && sy < h {
                acc = pick(acc, img.get(sx as usize, sy as usize));
            }
        }
        acc
    })
}

pub fn erode(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    rank_op(img, se, u8::MAX, u8::min)
}

pub fn dilate(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    rank_op(img, se, u8::MIN, u8::max)
}

/// Erosion followed by dilation with the reflected element.
pub fn open(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    dilate(&erode(img, se), &se.reflected())
}

/// Dilation followed by erosion with the reflected element.
pub fn close(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    erode(&dilate(img, se), &se.reflected())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(img: &GrayImage, r: isize, min: bool) -> GrayImage {
        GrayImage::from_fn(img.width(), img.height(), |x, y| {
            let mut vals = Vec::new();
            for dy in -r..=r {
                for dx in -r..=r {
                    vals.push(img.get_clamped(x as isize + dx, y as isize + dy));
                }
            }
            if min {
                *vals.iter().min().unwrap()
            } else {
                *vals.iter().max().unwrap()
            }
        })
    }

    #[test]
    fn bright_pixel_removed_by_opening() {
        let mut px = vec![0u8; 49];
        px[24] = 200;
        let img = GrayImage::new(7, 7, px).unwrap();
        let se = StructuringElement::default();
        // direct min/max oracle with replicated border
        let oracle = naive(&naive(&img, 1, true), 1, false);
        let opened = open(&img, &se);
        assert_eq!(opened, oracle);
        assert!(opened.pixels().iter().all(|&p| p == 0));
    }

    #[test]
    fn mask_constructor() {
        let se = StructuringElement::from_mask(3, 3, &[false, true, false, true, true, true, false, true, false]).unwrap();
        let mut a = se.offsets().to_vec();
        let mut b = StructuringElement::cross(1).offsets().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert!(StructuringElement::from_mask(2, 3, &[true; 6]).is_err());
        assert!(StructuringElement::from_mask(1, 1, &[false]).is_err());
    }

    fn arb_image() -> impl Strategy<Value = GrayImage> {
        (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h)
                .prop_map(move |px| GrayImage::new(w, h, px).unwrap())
        })
    }

    proptest! {
        #[test]
        fn box_matches_replicate_padding(img in arb_image(), r in 1usize..3) {
            let se = StructuringElement::square(r);
            prop_assert_eq!(erode(&img, &se), naive(&img, r as isize, true));
            prop_assert_eq!(dilate(&img, &se), naive(&img, r as isize, false));
        }

        #[test]
        fn opening_and_closing_idempotent(img in arb_image(), cross in any::<bool>()) {
            let se = if cross { StructuringElement::cross(1) } else { StructuringElement::square(1) };
            let o = open(&img, &se);
            prop_assert_eq!(open(&o, &se), o);
            let c = close(&img, &se);
            prop_assert_eq!(close(&c, &se), c);
        }

        #[test]
        fn complement_duality(img in arb_image()) {
            let se = StructuringElement::square(1);
            prop_assert_eq!(dilate(&img.complement(), &se), erode(&img, &se).complement());
        }

        #[test]
        fn erode_identity_dilate_ordering(img in arb_image()) {
            let se = StructuringElement::square(1);
            let e = erode(&img, &se);
            let d = dilate(&img, &se);
            for i in 0..img.pixels().len() {
                prop_assert!(e.pixels()[i] <= img.pixels()[i]);
                prop_assert!(img.pixels()[i] <= d.pixels()[i]);
            }
        }
    }
}
