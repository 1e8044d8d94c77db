//! Deterministic Monte Carlo BER sweeps and image-link experiments.
//!
//! Every simulated symbol ("trial") draws its bits, channel and noise from
//! its own generator seeded by `mix_seed(master_seed, point, trial)`, so the
//! outcome of a trial never depends on which worker ran it. Trials run in
//! fixed-size batches; each batch is reduced in trial order and the stop
//! rule is checked after every trial, which makes the reported counts
//! independent of both worker count and batch size.

use std::fmt::Write as _;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::baselines::baseline_link;
use crate::bits;
use crate::channel::{apply_channel, draw_channel};
use crate::codebook::{Constellation, ConstellationKind, SpreadingCodebook};
use crate::error::{invalid, Result};
use crate::imaging::{bits_to_pixels, pad_bits, pixels_to_bits, psnr, unpad_bits, GrayImage};
use crate::metrics;
use crate::modem::{spread, split_bits};
use crate::receiver::receive;

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for trial `trial` of SNR point `point`.
pub fn mix_seed(master: u64, point: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ point) ^ trial)
}

pub fn trial_rng(master: u64, point: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(master, point, trial))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Cim { order: usize, n_w: usize, chip_len: usize },
    Qam { order: usize },
    Psk { order: usize },
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Cim { .. } => "cim",
            Scheme::Qam { .. } => "qam",
            Scheme::Psk { .. } => "psk",
        }
    }
}

/// A transmission scheme plus receive antenna count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkConfig {
    pub scheme: Scheme,
    pub n_r: usize,
}

/// Prepared link: codebook and constellation built once, shared read-only.
#[derive(Debug, Clone)]
pub struct Link {
    config: LinkConfig,
    constellation: Constellation,
    codebook: Option<SpreadingCodebook>,
}

impl Link {
    pub fn new(config: LinkConfig) -> Result<Self> {
        if config.n_r == 0 {
            return invalid("at least one receive antenna is required");
        }
        let (constellation, codebook) = match config.scheme {
            Scheme::Cim { order: 2, n_w, .. } if n_w > 0 => {
                return invalid("CIM with a real (M=2) constellation cannot carry quadrature code bits")
            }
            Scheme::Cim { order, n_w, chip_len } => (
                Constellation::new(order, ConstellationKind::Qam)?,
                Some(SpreadingCodebook::new(n_w, chip_len)?),
            ),
            Scheme::Qam { order } => (Constellation::new(order, ConstellationKind::Qam)?, None),
            Scheme::Psk { order } => (Constellation::new(order, ConstellationKind::Psk)?, None),
        };
        Ok(Self {
            config,
            constellation,
            codebook,
        })
    }

    pub fn config(&self) -> &LinkConfig {
        &self.config
    }

    /// Bits per transmitted symbol.
    pub fn eta(&self) -> usize {
        let n_w = self.codebook.as_ref().map_or(0, |c| c.n_w());
        2 * n_w + self.constellation.bits_per_symbol()
    }

    /// Sends one `eta`-bit group over a fresh channel draw; returns the
    /// detected group.
    pub fn transmit(&self, group: &[bool], snr_db: f64, rng: &mut ChaCha8Rng) -> Result<Vec<bool>> {
        match &self.codebook {
            Some(cb) => {
                let sym = split_bits(group, cb.n_w(), self.constellation.order())?;
                let tx = spread(sym, cb, &self.constellation)?;
                let h = draw_channel(self.config.n_r, rng)?;
                let y = apply_channel(&tx, &h, snr_db, rng);
                receive(&y, &h, cb, &self.constellation)
            }
            None => baseline_link(group, &self.constellation, self.config.n_r, snr_db, rng),
        }
    }

    /// One full trial: random bits, transmit, count bit errors.
    fn run_trial(&self, snr_db: f64, rng: &mut ChaCha8Rng) -> Result<u64> {
        let group = bits::random_bits(rng, self.eta());
        let rx = self.transmit(&group, snr_db, rng)?;
        Ok(bits::hamming(&group, &rx) as u64)
    }
}

/// BER sweep settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub link: LinkConfig,
    pub snr_points: Vec<f64>,
    /// Stop a point once this many bit errors have been seen.
    pub min_bit_errors: u64,
    /// Hard cap on simulated bits per point; rounded down to whole symbols.
    pub max_bits: u64,
    pub master_seed: u64,
    /// Symbol duration used for the throughput column.
    pub symbol_time: f64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl SweepConfig {
    pub fn new(link: LinkConfig, snr_points: Vec<f64>) -> Self {
        Self {
            link,
            snr_points,
            min_bit_errors: 100,
            max_bits: 10_000_000,
            master_seed: 0,
            symbol_time: 1.0,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
    pub throughput: f64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub const CSV_HEADER: &'static str = "snr_db,bits,errors,ber,throughput";

    /// CSV table, optionally preceded by a `# config:` line.
    pub fn to_csv(&self, config_comment: Option<&str>) -> String {
        let mut s = String::new();
        if let Some(c) = config_comment {
            writeln!(s, "# config: {c}").unwrap();
        }
        writeln!(s, "{}", Self::CSV_HEADER).unwrap();
        for p in &self.points {
            writeln!(s, "{},{},{},{:e},{}", p.snr_db, p.bits, p.errors, p.ber, p.throughput).unwrap();
        }
        s
    }

    pub fn write_csv<W: Write>(&self, mut out: W, config_comment: Option<&str>) -> Result<()> {
        out.write_all(self.to_csv(config_comment).as_bytes())?;
        Ok(())
    }
}

const BATCH: u64 = 4096;

fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| crate::Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn run_point(link: &Link, cfg: &SweepConfig, index: usize, snr_db: f64) -> Result<SweepPoint> {
    let start = Instant::now();
    let eta = link.eta() as u64;
    let max_trials = cfg.max_bits / eta;
    let (mut trials, mut errors) = (0u64, 0u64);
    'outer: while trials < max_trials && errors < cfg.min_bit_errors {
        let end = (trials + BATCH).min(max_trials);
        let batch: Vec<u64> = (trials..end)
            .into_par_iter()
            .map(|t| link.run_trial(snr_db, &mut trial_rng(cfg.master_seed, index as u64, t)))
            .collect::<Result<_>>()?;
        for e in batch {
            trials += 1;
            errors += e;
            if errors >= cfg.min_bit_errors {
                break 'outer;
            }
        }
    }
    let bits = trials * eta;
    let ber = if bits == 0 { 0.0 } else { errors as f64 / bits as f64 };
    Ok(SweepPoint {
        snr_db,
        bits,
        errors,
        ber,
        throughput: metrics::throughput(ber, eta as f64, cfg.symbol_time)?,
        wall_time: start.elapsed(),
    })
}

pub fn run_ber_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    if cfg.snr_points.iter().any(|s| s.is_nan() || *s == f64::NEG_INFINITY) {
        return invalid("SNR points must be numbers or +inf");
    }
    if !(cfg.symbol_time > 0.0) {
        return invalid("symbol time must be positive");
    }
    let link = Link::new(cfg.link)?;
    if cfg.max_bits < link.eta() as u64 {
        return invalid(format!(
            "max_bits {} is smaller than one {}-bit symbol",
            cfg.max_bits,
            link.eta()
        ));
    }
    in_pool(cfg.workers, || {
        let points = cfg
            .snr_points
            .iter()
            .enumerate()
            .map(|(i, &snr)| run_point(&link, cfg, i, snr))
            .collect::<Result<Vec<_>>>()?;
        Ok(SweepResult { points })
    })?
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageLinkResult {
    pub received: GrayImage,
    pub ber: f64,
    pub psnr: f64,
}

/// Sends an image through the link symbol by symbol.
///
/// The pixel bitstream is zero-padded to a whole number of symbols; symbol
/// `t` uses `trial_rng(seed, 0, t)`.
pub fn run_image_link(image: &GrayImage, link: LinkConfig, snr_db: f64, seed: u64) -> Result<ImageLinkResult> {
    run_image_link_with(image, link, snr_db, seed, None)
}

pub fn run_image_link_with(
    image: &GrayImage,
    link: LinkConfig,
    snr_db: f64,
    seed: u64,
    workers: Option<usize>,
) -> Result<ImageLinkResult> {
    if snr_db.is_nan() {
        return invalid("SNR must be a number");
    }
    let link = Link::new(link)?;
    let eta = link.eta();
    let tx_bits = pixels_to_bits(image);
    let mut padded = tx_bits.clone();
    let pad = pad_bits(&mut padded, eta);

    let mut rx_bits: Vec<bool> = in_pool(workers, || {
        padded
            .par_chunks(eta)
            .enumerate()
            .map(|(t, group)| link.transmit(group, snr_db, &mut trial_rng(seed, 0, t as u64)))
            .collect::<Result<Vec<Vec<bool>>>>()
    })??
    .concat();
    unpad_bits(&mut rx_bits, pad);

    let received = bits_to_pixels(&rx_bits, image.width(), image.height())?;
    let ber = if tx_bits.is_empty() {
        0.0
    } else {
        metrics::ber(&tx_bits, &rx_bits)?
    };
    let psnr = psnr(image, &received)?;
    Ok(ImageLinkResult { received, ber, psnr })
}
