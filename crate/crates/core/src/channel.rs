//! SIMO flat Rayleigh block fading with additive white Gaussian noise.
//!
//! The in-phase and quadrature spreading branches reach each receive antenna
//! through the same complex gain `h_k` and are observed separately after
//! coherent carrier recovery:
//!
//! ```text
//! R_I = x_re * h * z[c_re]^T + W_I
//! R_Q = x_im * h * z[c_im]^T + W_Q
//! ```
//!
//! `W_I` and `W_Q` hold i.i.d. circularly-symmetric complex Gaussian entries
//! with total variance `N0 = Es / 10^(snr_db / 10)` and `Es = 1`, i.e. `N0/2`
//! per real component. An SNR of `+inf` disables the noise.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::modem::TransmitBlock;

/// Per-antenna complex channel gains for one symbol interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub gains: Vec<Complex64>,
}

impl ChannelRealization {
    /// Unit gain on every antenna.
    pub fn ones(n_r: usize) -> Self {
        Self {
            gains: vec![Complex64::new(1.0, 0.0); n_r],
        }
    }

    pub fn n_r(&self) -> usize {
        self.gains.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.gains.iter().map(|h| h.norm_sqr()).sum()
    }
}

/// Draws one sample of a zero-mean complex Gaussian with the given total variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let sigma = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * sigma, im * sigma)
}

/// Draws `n_r` i.i.d. CN(0, 1) gains.
pub fn draw_channel<R: Rng + ?Sized>(n_r: usize, rng: &mut R) -> Result<ChannelRealization> {
    if n_r == 0 {
        return invalid("at least one receive antenna is required");
    }
    Ok(ChannelRealization {
        gains: (0..n_r).map(|_| complex_gaussian(rng, 1.0)).collect(),
    })
}

/// Complex noise variance `N0` for unit symbol energy; zero for `+inf`.
pub fn noise_variance(snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        10f64.powf(-snr_db / 10.0)
    }
}

/// Received chips on all antennas, split into the two quadrature branches.
///
/// Both matrices are `n_r x chip_len`, stored row-major (one row per antenna).
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedBlock {
    n_r: usize,
    chip_len: usize,
    r_i: Vec<Complex64>,
    r_q: Vec<Complex64>,
}

impl ReceivedBlock {
    pub fn from_parts(
        n_r: usize,
        chip_len: usize,
        r_i: Vec<Complex64>,
        r_q: Vec<Complex64>,
    ) -> Result<Self> {
        if r_i.len() != n_r * chip_len || r_q.len() != n_r * chip_len {
            return invalid("received block dimensions do not match n_r x chip_len");
        }
        Ok(Self {
            n_r,
            chip_len,
            r_i,
            r_q,
        })
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn chip_len(&self) -> usize {
        self.chip_len
    }

    /// In-phase branch row of antenna `k`.
    pub fn r_i(&self, k: usize) -> &[Complex64] {
        &self.r_i[k * self.chip_len..(k + 1) * self.chip_len]
    }

    /// Quadrature branch row of antenna `k`.
    pub fn r_q(&self, k: usize) -> &[Complex64] {
        &self.r_q[k * self.chip_len..(k + 1) * self.chip_len]
    }

    /// `R_I + j R_Q` for antenna `k`. Equals `h_k * s` plus noise.
    pub fn combined(&self, k: usize) -> Vec<Complex64> {
        self.r_i(k)
            .iter()
            .zip(self.r_q(k))
            .map(|(i, q)| i + Complex64::i() * q)
            .collect()
    }
}

pub fn apply_channel<R: Rng + ?Sized>(
    block: &TransmitBlock,
    h: &ChannelRealization,
    snr_db: f64,
    rng: &mut R,
) -> ReceivedBlock {
    let n0 = noise_variance(snr_db);
    let n_r = h.n_r();
    let chip_len = block.len();
    let mut r_i = Vec::with_capacity(n_r * chip_len);
    let mut r_q = Vec::with_capacity(n_r * chip_len);
    for &g in &h.gains {
        for s in &block.chips {
            r_i.push(g * s.re);
            r_q.push(g * s.im);
        }
    }
    if n0 > 0.0 {
        for v in r_i.iter_mut().chain(r_q.iter_mut()) {
            *v += complex_gaussian(rng, n0);
        }
    }
    ReceivedBlock {
        n_r,
        chip_len,
        r_i,
        r_q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{build_codebook, build_constellation, ConstellationKind};
    use crate::modem::{spread, CimSymbol};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn block() -> TransmitBlock {
        let cb = build_codebook(2, 8).unwrap();
        let qam = build_constellation(16, ConstellationKind::Qam).unwrap();
        spread(CimSymbol { sym_idx: 7, c_re: 1, c_im: 3 }, &cb, &qam).unwrap()
    }

    #[test]
    fn channel_draw_is_reproducible() {
        let a = draw_channel(4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = draw_channel(4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        assert!(draw_channel(0, &mut ChaCha8Rng::seed_from_u64(9)).is_err());
    }

    #[test]
    fn channel_power_is_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 100_000;
        let mean: f64 = (0..n)
            .map(|_| draw_channel(1, &mut rng).unwrap().gains[0].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean |h|^2 = {mean}");
    }

    #[test]
    fn channel_magnitude_is_rayleigh() {
        // Kolmogorov-Smirnov distance against F(r) = 1 - exp(-r^2) (sigma^2 = 1/2)
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let mut mags: Vec<f64> = (0..n)
            .map(|_| draw_channel(1, &mut rng).unwrap().gains[0].norm())
            .collect();
        mags.sort_by(f64::total_cmp);
        let ks = mags
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let cdf = 1.0 - (-r * r).exp();
                let lo = i as f64 / n as f64;
                let hi = (i + 1) as f64 / n as f64;
                (cdf - lo).abs().max((hi - cdf).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "KS distance {ks}");
    }

    #[test]
    fn noiseless_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let tx = block();
        let h = draw_channel(3, &mut rng).unwrap();
        let y = apply_channel(&tx, &h, f64::INFINITY, &mut rng);
        for k in 0..3 {
            for (l, s) in tx.chips.iter().enumerate() {
                assert_eq!(y.combined(k)[l], h.gains[k] * s);
                assert_eq!(y.r_i(k)[l], h.gains[k] * s.re);
                assert_eq!(y.r_q(k)[l], h.gains[k] * s.im);
            }
        }
    }

    #[test]
    fn unit_channel_rows_equal_chips() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let tx = block();
        let y = apply_channel(&tx, &ChannelRealization::ones(2), f64::INFINITY, &mut rng);
        for k in 0..2 {
            assert_eq!(y.combined(k), tx.chips);
        }
    }

    #[test]
    fn noise_variance_at_zero_db() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let zero = TransmitBlock {
            chips: vec![Complex64::new(0.0, 0.0); 1000],
        };
        let h = ChannelRealization::ones(50);
        let y = apply_channel(&zero, &h, 0.0, &mut rng);
        let mut total = 0.0;
        let mut re_sq = 0.0;
        for k in 0..50 {
            for v in y.r_i(k) {
                total += v.norm_sqr();
                re_sq += v.re * v.re;
            }
        }
        let n = 50_000.0;
        assert!((total / n - 1.0).abs() < 0.02, "complex variance {}", total / n);
        assert!((re_sq / n - 0.5).abs() < 0.01, "per-component variance {}", re_sq / n);
    }

    #[test]
    fn noise_variance_values() {
        assert_eq!(noise_variance(f64::INFINITY), 0.0);
        assert!((noise_variance(0.0) - 1.0).abs() < 1e-15);
        assert!((noise_variance(10.0) - 0.1).abs() < 1e-15);
    }
}
