//! Two-stage CIM receiver and a brute-force joint ML reference detector.
//!
//! Stage one despreads both branches with every code and picks, per branch,
//! the code whose correlator output has the largest energy summed over the
//! antennas. Stage two runs an ML search over the constellation using only
//! the two selected correlator columns. Ties resolve to the smallest index.

use num_complex::Complex64;

use crate::bits;
use crate::channel::{ChannelRealization, ReceivedBlock};
use crate::codebook::{Constellation, SpreadingCodebook};
use crate::error::{invalid, Result};
use crate::modem::CimSymbol;

/// Correlator outputs of both branches for every code and antenna.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorBank {
    n_r: usize,
    n_codes: usize,
    // code-major: column c occupies [c * n_r, (c + 1) * n_r)
    i_branch: Vec<Complex64>,
    q_branch: Vec<Complex64>,
}

impl CorrelatorBank {
    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_codes(&self) -> usize {
        self.n_codes
    }

    /// `R_I * z_c`, one entry per antenna.
    pub fn i_column(&self, c: usize) -> &[Complex64] {
        &self.i_branch[c * self.n_r..(c + 1) * self.n_r]
    }

    /// `R_Q * z_c`, one entry per antenna.
    pub fn q_column(&self, c: usize) -> &[Complex64] {
        &self.q_branch[c * self.n_r..(c + 1) * self.n_r]
    }
}

pub fn despread(y: &ReceivedBlock, codebook: &SpreadingCodebook) -> Result<CorrelatorBank> {
    if y.chip_len() != codebook.chip_len() {
        return invalid(format!(
            "received block has {} chips, codebook expects {}",
            y.chip_len(),
            codebook.chip_len()
        ));
    }
    let n_r = y.n_r();
    let n_codes = codebook.n_codes();
    let mut i_branch = Vec::with_capacity(n_r * n_codes);
    let mut q_branch = Vec::with_capacity(n_r * n_codes);
    for code in codebook.codes() {
        for k in 0..n_r {
            i_branch.push(correlate(y.r_i(k), code));
            q_branch.push(correlate(y.r_q(k), code));
        }
    }
    Ok(CorrelatorBank {
        n_r,
        n_codes,
        i_branch,
        q_branch,
    })
}

fn correlate(row: &[Complex64], code: &[f64]) -> Complex64 {
    row.iter()
        .zip(code)
        .fold(Complex64::new(0.0, 0.0), |acc, (r, &z)| acc + r * z)
}

fn energy(col: &[Complex64]) -> f64 {
    col.iter().map(|v| v.norm_sqr()).sum()
}

/// First index of the maximum; NaN never wins.
fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// `(c_re, c_im)` maximizing the correlator energy of each branch.
pub fn detect_indices(bank: &CorrelatorBank) -> (usize, usize) {
    let c_re = argmax((0..bank.n_codes).map(|c| energy(bank.i_column(c))));
    let c_im = argmax((0..bank.n_codes).map(|c| energy(bank.q_column(c))));
    (c_re, c_im)
}

/// ML symbol decision from the selected correlator columns.
///
/// Minimizes `|| (r_i + j r_q) - x h ||^2` over the constellation, computed as
/// `|x|^2 ||h||^2 - 2 Re(conj(x) h^H r)` which differs from the full metric
/// only by the constant `||r||^2`.
pub fn detect_symbol(
    r_i: &[Complex64],
    r_q: &[Complex64],
    h: &ChannelRealization,
    constellation: &Constellation,
) -> usize {
    let matched: Complex64 = h
        .gains
        .iter()
        .zip(r_i.iter().zip(r_q))
        .map(|(g, (i, q))| g.conj() * (i + Complex64::i() * q))
        .sum();
    nearest_point(matched, h.norm_sqr(), constellation)
}

/// Label minimizing `|x|^2 gain - 2 Re(conj(x) matched)`, smallest on ties.
pub(crate) fn nearest_point(matched: Complex64, gain: f64, constellation: &Constellation) -> usize {
    let mut best = (0, f64::INFINITY);
    for (idx, x) in constellation.points().iter().enumerate() {
        let metric = x.norm_sqr() * gain - 2.0 * (x.conj() * matched).re;
        if metric < best.1 {
            best = (idx, metric);
        }
    }
    best.0
}

/// Inverse of [`crate::modem::split_bits`].
pub fn demap(sym: CimSymbol, n_w: usize, order: usize) -> Vec<bool> {
    let n_m = order.trailing_zeros() as usize;
    let mut out = Vec::with_capacity(2 * n_w + n_m);
    bits::push_index(&mut out, sym.sym_idx, n_m);
    bits::push_index(&mut out, sym.c_re, n_w);
    bits::push_index(&mut out, sym.c_im, n_w);
    out
}

/// Two-stage detection of one symbol.
pub fn detect(
    y: &ReceivedBlock,
    h: &ChannelRealization,
    codebook: &SpreadingCodebook,
    constellation: &Constellation,
) -> Result<CimSymbol> {
    if h.n_r() != y.n_r() {
        return invalid("channel and received block disagree on n_r");
    }
    let bank = despread(y, codebook)?;
    let (c_re, c_im) = detect_indices(&bank);
    let sym_idx = detect_symbol(bank.i_column(c_re), bank.q_column(c_im), h, constellation);
    Ok(CimSymbol {
        sym_idx,
        c_re,
        c_im,
    })
}

/// Full receive chain: despread, detect indices, detect symbol, demap.
pub fn receive(
    y: &ReceivedBlock,
    h: &ChannelRealization,
    codebook: &SpreadingCodebook,
    constellation: &Constellation,
) -> Result<Vec<bool>> {
    let sym = detect(y, h, codebook, constellation)?;
    Ok(demap(sym, codebook.n_w(), constellation.order()))
}

/// Largest hypothesis count accepted by [`joint_ml_oracle`].
pub const JOINT_ML_MAX_HYPOTHESES: usize = 1 << 20;

/// Exhaustive ML over every `(c_re, c_im, symbol)` hypothesis.
///
/// Evaluates the chip-domain residual `||R_I - x_re h z_re^T||^2 +
/// ||R_Q - x_im h z_im^T||^2` directly, without using the correlators.
/// The two branch residuals are cached per `(code, symbol)` pair.
pub fn joint_ml_oracle(
    y: &ReceivedBlock,
    h: &ChannelRealization,
    codebook: &SpreadingCodebook,
    constellation: &Constellation,
) -> Result<CimSymbol> {
    let n_codes = codebook.n_codes();
    let order = constellation.order();
    let hypotheses = order
        .checked_mul(n_codes)
        .and_then(|v| v.checked_mul(n_codes));
    match hypotheses {
        Some(n) if n <= JOINT_ML_MAX_HYPOTHESES => {}
        _ => {
            return invalid(format!(
                "joint ML search space {order} x {n_codes}^2 exceeds {JOINT_ML_MAX_HYPOTHESES}"
            ))
        }
    }
    if y.chip_len() != codebook.chip_len() || h.n_r() != y.n_r() {
        return invalid("received block does not match codebook or channel");
    }

    let residual = |quadrature: bool, amp: f64, code: &[f64]| -> f64 {
        let mut acc = 0.0;
        for (k, g) in h.gains.iter().enumerate() {
            let row = if quadrature { y.r_q(k) } else { y.r_i(k) };
            for (r, &z) in row.iter().zip(code) {
                acc += (r - g * (amp * z)).norm_sqr();
            }
        }
        acc
    };
    let mut res_i = vec![0.0; n_codes * order];
    let mut res_q = vec![0.0; n_codes * order];
    for c in 0..n_codes {
        let code = codebook.code(c);
        for (s, x) in constellation.points().iter().enumerate() {
            res_i[c * order + s] = residual(false, x.re, code);
            res_q[c * order + s] = residual(true, x.im, code);
        }
    }

    let mut best = (CimSymbol::default(), f64::INFINITY);
    for c_re in 0..n_codes {
        for c_im in 0..n_codes {
            for sym_idx in 0..order {
                let metric = res_i[c_re * order + sym_idx] + res_q[c_im * order + sym_idx];
                if metric < best.1 {
                    best = (
                        CimSymbol {
                            sym_idx,
                            c_re,
                            c_im,
                        },
                        metric,
                    );
                }
            }
        }
    }
    Ok(best.0)
}
