//! Walsh-Hadamard spreading codes and Gray-labelled constellations.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bits::{exact_log2, gray_decode, gray_encode};
use crate::error::{invalid, Result};

/// Sylvester-Hadamard matrix of the given order.
///
/// Rows are pairwise orthogonal with entries in `{+1, -1}`.
pub fn hadamard(order: usize) -> Result<Vec<Vec<i8>>> {
    if order == 0 || !order.is_power_of_two() {
        return invalid(format!("hadamard order {order} is not a power of two"));
    }
    let mut h = vec![vec![1i8]];
    while h.len() < order {
        let n = h.len();
        let mut next = Vec::with_capacity(2 * n);
        for row in &h {
            let mut r = row.clone();
            r.extend_from_slice(row);
            next.push(r);
        }
        for row in &h {
            let mut r = row.clone();
            r.extend(row.iter().map(|&v| -v));
            next.push(r);
        }
        h = next;
    }
    Ok(h)
}

/// The `2^n_w` spreading codes available to each quadrature branch.
///
/// Codes are the first `2^n_w` Sylvester-Hadamard rows of order `chip_len`,
/// scaled to unit norm so that despreading with the matching code has gain 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadingCodebook {
    n_w: usize,
    chip_len: usize,
    codes: Vec<Vec<f64>>,
}

impl SpreadingCodebook {
    pub fn new(n_w: usize, chip_len: usize) -> Result<Self> {
        if !chip_len.is_power_of_two() {
            return invalid(format!("chip length {chip_len} is not a power of two"));
        }
        if n_w >= usize::BITS as usize || (1usize << n_w) > chip_len {
            return invalid(format!(
                "2^{n_w} codes do not fit in a length-{chip_len} Hadamard matrix"
            ));
        }
        let scale = 1.0 / (chip_len as f64).sqrt();
        let codes = hadamard(chip_len)?
            .into_iter()
            .take(1 << n_w)
            .map(|row| row.into_iter().map(|c| c as f64 * scale).collect())
            .collect();
        Ok(Self {
            n_w,
            chip_len,
            codes,
        })
    }

    /// Index bits carried per branch.
    pub fn n_w(&self) -> usize {
        self.n_w
    }

    pub fn n_codes(&self) -> usize {
        self.codes.len()
    }

    pub fn chip_len(&self) -> usize {
        self.chip_len
    }

    pub fn code(&self, index: usize) -> &[f64] {
        &self.codes[index]
    }

    pub fn codes(&self) -> &[Vec<f64>] {
        &self.codes
    }
}

pub fn build_codebook(n_w: usize, chip_len: usize) -> Result<SpreadingCodebook> {
    SpreadingCodebook::new(n_w, chip_len)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstellationKind {
    Qam,
    Psk,
}

/// Largest supported constellation order.
pub const MAX_ORDER: usize = 1 << 16;

/// `M` complex points with unit average energy, indexed by their bit label.
///
/// `points()[label]` is the point transmitted for the `log2(M)`-bit pattern
/// `label` (read MSB first). QAM uses a rectangular grid with an independent
/// Gray code on each axis: the first `ceil(k/2)` label bits select the
/// in-phase level and the remaining bits the quadrature level. PSK places
/// Gray-coded labels around the unit circle starting at phase 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    kind: ConstellationKind,
    points: Vec<Complex64>,
    bits_per_symbol: usize,
}

impl Constellation {
    pub fn new(order: usize, kind: ConstellationKind) -> Result<Self> {
        let k = match exact_log2(order) {
            Some(k) if (2..=MAX_ORDER).contains(&order) => k,
            _ => {
                return invalid(format!(
                    "constellation order {order} must be a power of two in 2..={MAX_ORDER}"
                ))
            }
        };
        let points = match kind {
            ConstellationKind::Qam => qam_points(k),
            ConstellationKind::Psk => psk_points(order),
        };
        Ok(Self {
            kind,
            points,
            bits_per_symbol: k,
        })
    }

    pub fn kind(&self) -> ConstellationKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, label: usize) -> Complex64 {
        self.points[label]
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }
}

pub fn build_constellation(order: usize, kind: ConstellationKind) -> Result<Constellation> {
    Constellation::new(order, kind)
}

fn qam_points(k: usize) -> Vec<Complex64> {
    let i_bits = k.div_ceil(2);
    let q_bits = k - i_bits;
    let level = |gray: usize, bits: usize| {
        let n = 1usize << bits;
        (2 * gray_decode(gray)) as f64 - (n - 1) as f64
    };
    let q_mask = (1usize << q_bits) - 1;
    let raw: Vec<Complex64> = (0..1usize << k)
        .map(|label| {
            Complex64::new(
                level(label >> q_bits, i_bits),
                level(label & q_mask, q_bits),
            )
        })
        .collect();
    let energy = raw.iter().map(|p| p.norm_sqr()).sum::<f64>() / raw.len() as f64;
    let scale = energy.sqrt().recip();
    raw.into_iter().map(|p| p * scale).collect()
}

fn psk_points(order: usize) -> Vec<Complex64> {
    let mut points = vec![Complex64::new(0.0, 0.0); order];
    for pos in 0..order {
        points[gray_encode(pos)] = Complex64::from_polar(1.0, 2.0 * PI * pos as f64 / order as f64);
    }
    points
}
