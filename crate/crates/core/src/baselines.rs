//! Conventional single-stream SIMO M-QAM / M-PSK links with ML detection.

use num_complex::Complex64;
use rand::Rng;

use crate::bits;
use crate::channel::{complex_gaussian, draw_channel, noise_variance, ChannelRealization};
use crate::codebook::Constellation;
use crate::error::{invalid, Result};
use crate::receiver::nearest_point;

/// Gray-labelled constellation point for a `log2(M)`-bit group.
pub fn baseline_modulate(group: &[bool], constellation: &Constellation) -> Result<Complex64> {
    if group.len() != constellation.bits_per_symbol() {
        return invalid(format!(
            "bit group has {} bits, expected {}",
            group.len(),
            constellation.bits_per_symbol()
        ));
    }
    Ok(constellation.point(bits::to_index(group)))
}

/// ML label for `y = h x + w`; equivalent to MRC followed by minimum distance.
pub fn baseline_detect(y: &[Complex64], h: &ChannelRealization, constellation: &Constellation) -> usize {
    let matched: Complex64 = h.gains.iter().zip(y).map(|(g, r)| g.conj() * r).sum();
    nearest_point(matched, h.norm_sqr(), constellation)
}

pub fn baseline_demodulate(
    y: &[Complex64],
    h: &ChannelRealization,
    constellation: &Constellation,
) -> Vec<bool> {
    bits::from_index(
        baseline_detect(y, h, constellation),
        constellation.bits_per_symbol(),
    )
}

/// Sends one symbol through a fresh Rayleigh draw and detects it.
pub fn baseline_link<R: Rng + ?Sized>(
    group: &[bool],
    constellation: &Constellation,
    n_r: usize,
    snr_db: f64,
    rng: &mut R,
) -> Result<Vec<bool>> {
    let x = baseline_modulate(group, constellation)?;
    let h = draw_channel(n_r, rng)?;
    let n0 = noise_variance(snr_db);
    let y: Vec<Complex64> = h
        .gains
        .iter()
        .map(|g| {
            let w = if n0 > 0.0 {
                complex_gaussian(rng, n0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            g * x + w
        })
        .collect();
    Ok(baseline_demodulate(&y, &h, constellation))
}
