//! CIM transmitter: bit splitting and spreading.

use num_complex::Complex64;

use crate::bits;
use crate::codebook::{Constellation, SpreadingCodebook};
use crate::error::{invalid, Result};

/// Bits carried by one CIM symbol: `2 * n_w + log2(order)`.
pub fn spectral_efficiency(n_w: usize, order: usize) -> usize {
    debug_assert!(order.is_power_of_two());
    2 * n_w + order.trailing_zeros() as usize
}

/// One transmission unit: constellation label plus the in-phase and
/// quadrature spreading code indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CimSymbol {
    pub sym_idx: usize,
    pub c_re: usize,
    pub c_im: usize,
}

/// Splits an `eta`-bit group into a [`CimSymbol`].
///
/// Layout is `[symbol label | c_re | c_im]`, each field MSB first.
pub fn split_bits(group: &[bool], n_w: usize, order: usize) -> Result<CimSymbol> {
    if !order.is_power_of_two() || order < 2 {
        return invalid(format!("constellation order {order} is not a power of two"));
    }
    let n_m = order.trailing_zeros() as usize;
    let eta = 2 * n_w + n_m;
    if group.len() != eta {
        return invalid(format!(
            "bit group has {} bits, expected {eta}",
            group.len()
        ));
    }
    let (sym, codes) = group.split_at(n_m);
    let (re, im) = codes.split_at(n_w);
    Ok(CimSymbol {
        sym_idx: bits::to_index(sym),
        c_re: bits::to_index(re),
        c_im: bits::to_index(im),
    })
}

/// `L` complex baseband chips of one CIM symbol.
///
/// The real part of chip `l` is `x_re * z[c_re][l]` and the imaginary part is
/// `x_im * z[c_im][l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmitBlock {
    pub chips: Vec<Complex64>,
}

impl TransmitBlock {
    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.chips.iter().map(|c| c.norm_sqr()).sum()
    }

    /// In-phase branch chips, `x_re * z[c_re]`.
    pub fn in_phase(&self) -> impl Iterator<Item = f64> + '_ {
        self.chips.iter().map(|c| c.re)
    }

    /// Quadrature branch chips, `x_im * z[c_im]`.
    pub fn quadrature(&self) -> impl Iterator<Item = f64> + '_ {
        self.chips.iter().map(|c| c.im)
    }
}

pub fn spread(
    sym: CimSymbol,
    codebook: &SpreadingCodebook,
    constellation: &Constellation,
) -> Result<TransmitBlock> {
    if sym.sym_idx >= constellation.order() {
        return invalid(format!("symbol index {} out of range", sym.sym_idx));
    }
    if sym.c_re >= codebook.n_codes() || sym.c_im >= codebook.n_codes() {
        return invalid(format!(
            "code indices ({}, {}) out of range for {} codes",
            sym.c_re,
            sym.c_im,
            codebook.n_codes()
        ));
    }
    let x = constellation.point(sym.sym_idx);
    let chips = codebook
        .code(sym.c_re)
        .iter()
        .zip(codebook.code(sym.c_im))
        .map(|(&zr, &zi)| Complex64::new(x.re * zr, x.im * zi))
        .collect();
    Ok(TransmitBlock { chips })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{build_codebook, build_constellation, ConstellationKind};

    #[test]
    fn efficiency() {
        assert_eq!(spectral_efficiency(3, 4), 8);
        assert_eq!(spectral_efficiency(4, 8), 11);
        assert_eq!(spectral_efficiency(0, 2), 1);
        assert_eq!(spectral_efficiency(5, 32), 15);
    }

    #[test]
    fn split_example() {
        let group = [true, false, true, true, false, false, false, true];
        let s = split_bits(&group, 3, 4).unwrap();
        assert_eq!(s, CimSymbol { sym_idx: 0b10, c_re: 6, c_im: 1 });
        assert_eq!(split_bits(&[false; 8], 3, 4).unwrap(), CimSymbol::default());
        assert!(split_bits(&[false; 7], 3, 4).is_err());
    }

    #[test]
    fn spread_two_chip_example() {
        let cb = build_codebook(1, 2).unwrap();
        let qam = build_constellation(4, ConstellationKind::Qam).unwrap();
        // label 0b11 is (1+j)/sqrt2
        let block = spread(CimSymbol { sym_idx: 3, c_re: 0, c_im: 0 }, &cb, &qam).unwrap();
        for c in &block.chips {
            assert!((c - Complex64::new(0.5, 0.5)).norm() < 1e-12);
        }
    }

    #[test]
    fn real_symbol_spreads_to_real_chips() {
        let cb = build_codebook(2, 8).unwrap();
        let bpsk = build_constellation(2, ConstellationKind::Qam).unwrap();
        let block = spread(CimSymbol { sym_idx: 1, c_re: 2, c_im: 3 }, &cb, &bpsk).unwrap();
        assert!(block.chips.iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn spread_energy_equals_symbol_energy() {
        let cb = build_codebook(3, 32).unwrap();
        let qam = build_constellation(16, ConstellationKind::Qam).unwrap();
        for sym_idx in 0..16 {
            for c_re in 0..8 {
                for c_im in 0..8 {
                    let block = spread(CimSymbol { sym_idx, c_re, c_im }, &cb, &qam).unwrap();
                    let mut energy = 0.0;
                    for l in 0..block.len() {
                        energy += block.chips[l].re * block.chips[l].re
                            + block.chips[l].im * block.chips[l].im;
                    }
                    assert!((energy - qam.point(sym_idx).norm_sqr()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn spread_rejects_out_of_range() {
        let cb = build_codebook(1, 4).unwrap();
        let qam = build_constellation(4, ConstellationKind::Qam).unwrap();
        assert!(spread(CimSymbol { sym_idx: 4, c_re: 0, c_im: 0 }, &cb, &qam).is_err());
        assert!(spread(CimSymbol { sym_idx: 0, c_re: 2, c_im: 0 }, &cb, &qam).is_err());
    }
}
