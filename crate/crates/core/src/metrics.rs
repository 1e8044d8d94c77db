//! Bit error counting and closed-form efficiency measures.

use crate::bits::{exact_log2, hamming};
use crate::error::{invalid, Result};

/// Fraction of positions where `tx` and `rx` differ.
pub fn ber(tx: &[bool], rx: &[bool]) -> Result<f64> {
    if tx.len() != rx.len() || tx.is_empty() {
        return invalid(format!(
            "bit streams must be equal and non-empty ({} vs {})",
            tx.len(),
            rx.len()
        ));
    }
    Ok(hamming(tx, rx) as f64 / tx.len() as f64)
}

/// Correctly delivered bits per second: `(1 - aber) * eta / t_s`.
pub fn throughput(aber: f64, eta: f64, t_s: f64) -> Result<f64> {
    if !(t_s > 0.0) {
        return invalid(format!("symbol duration must be positive, got {t_s}"));
    }
    if !(0.0..=1.0).contains(&aber) {
        return invalid(format!("error rate {aber} outside [0, 1]"));
    }
    Ok((1.0 - aber) * eta / t_s)
}

/// Per-bit energy saved relative to a system carrying `n_c` bits per symbol,
/// in percent: `(1 - n_c / eta) * 100`.
pub fn energy_saving(n_c: f64, eta: f64) -> Result<f64> {
    if !(n_c > 0.0) || n_c > eta {
        return invalid(format!("need 0 < n_c <= eta, got n_c={n_c}, eta={eta}"));
    }
    Ok((1.0 - n_c / eta) * 100.0)
}

/// Systems the CIM link is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Qam,
    Psk,
    /// Spatial modulation with `n_t` transmit antennas.
    Sm { n_t: usize },
}

/// Bits per symbol of a comparator using an `order`-point constellation.
///
/// QAM and PSK carry `log2(M)`; spatial modulation adds `log2(n_t)` antenna
/// index bits.
pub fn comparator_efficiency(comparator: Comparator, order: usize) -> Result<usize> {
    let n_m = exact_log2(order)
        .ok_or_else(|| crate::Error::InvalidArgument(format!("order {order} is not a power of two")))?;
    match comparator {
        Comparator::Qam | Comparator::Psk => Ok(n_m),
        Comparator::Sm { n_t } => exact_log2(n_t).map(|a| n_m + a).ok_or_else(|| {
            crate::Error::InvalidArgument(format!("antenna count {n_t} is not a power of two"))
        }),
    }
}
