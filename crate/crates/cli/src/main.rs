//! `cimit` command-line front end.
//!
//! Exit codes: 0 on success, 1 for runtime or I/O failures, 2 for usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use cimit::imaging::{psnr, read_pgm, write_pgm, Filter, NlmParams, StructuringElement};
use cimit::metrics::{comparator_efficiency, energy_saving, throughput, Comparator};
use cimit::modem::spectral_efficiency;
use cimit::simkit::{run_ber_sweep, run_image_link_with, LinkConfig, Scheme, SweepConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod snr;

#[derive(Parser, Debug)]
#[command(name = "cimit", version, about = "Code index modulation image transmission simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monte Carlo BER sweep written as CSV.
    Ber(BerArgs),
    /// Send a PGM image through the link and write what arrives.
    SendImage(SendImageArgs),
    /// Apply an enhancement filter to a PGM image.
    Enhance(EnhanceArgs),
    /// Closed-form spectral efficiency, throughput and energy saving.
    Metrics {
        #[command(subcommand)]
        metric: MetricCommand,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SchemeKind {
    Cim,
    Qam,
    Psk,
}

#[derive(Args, Debug)]
struct SchemeArgs {
    #[arg(long, value_enum, default_value = "cim")]
    scheme: SchemeKind,
    /// Constellation order.
    #[arg(long)]
    m: usize,
    /// Code index bits per branch (CIM only).
    #[arg(long)]
    nw: Option<usize>,
    /// Chips per spreading code (CIM only).
    #[arg(long)]
    l: Option<usize>,
    /// Receive antennas.
    #[arg(long, default_value_t = 1)]
    nr: usize,
}

impl SchemeArgs {
    fn link(&self) -> Result<LinkConfig, CliError> {
        let scheme = match self.scheme {
            SchemeKind::Cim => {
                let n_w = self.nw.ok_or_else(|| usage("--nw is required for --scheme cim"))?;
                let chip_len = self.l.ok_or_else(|| usage("--l is required for --scheme cim"))?;
                Scheme::Cim { order: self.m, n_w, chip_len }
            }
            SchemeKind::Qam => Scheme::Qam { order: self.m },
            SchemeKind::Psk => Scheme::Psk { order: self.m },
        };
        Ok(LinkConfig { scheme, n_r: self.nr })
    }
}

#[derive(Args, Debug)]
struct BerArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// SNR points in dB: a single value, `start:step:stop`, or `inf`.
    #[arg(long, value_parser = snr::parse_range)]
    snr: snr::SnrPoints,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop a point after this many bit errors.
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    /// Simulate at most this many bits per point.
    #[arg(long, default_value_t = 10_000_000)]
    max_bits: u64,
    /// Symbol duration for the throughput column.
    #[arg(long, default_value_t = 1.0)]
    ts: f64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SendImageArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// SNR in dB, or `inf` to disable noise.
    #[arg(long, value_parser = snr::parse_single)]
    snr: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// One-row CSV with the measured BER and PSNR.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FilterKind {
    Median,
    Majority,
    Morph,
    Wiener,
    Wavelet,
    Nlm,
    Pipeline,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ElementShape {
    Square,
    Cross,
}

#[derive(Args, Debug)]
struct EnhanceArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    filter: FilterKind,
    #[arg(long)]
    out: PathBuf,
    /// Neighborhood radius for median and majority filters.
    #[arg(long, default_value_t = 1)]
    radius: usize,
    /// Window size for the Wiener filter.
    #[arg(long, default_value_t = 3)]
    window: usize,
    /// Structuring element for morphological filters.
    #[arg(long, value_enum, default_value = "square")]
    element: ElementShape,
    #[arg(long, default_value_t = 1)]
    element_radius: usize,
    /// NLM patch radius.
    #[arg(long, default_value_t = 1)]
    patch: usize,
    /// NLM search radius.
    #[arg(long, default_value_t = 5)]
    search: usize,
    /// NLM filtering strength.
    #[arg(long, default_value_t = 10.0)]
    h: f64,
    /// Reference image for PSNR reporting.
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VsKind {
    Qam,
    Psk,
    Sm,
}

#[derive(Subcommand, Debug)]
enum MetricCommand {
    /// Bits per symbol.
    Eta {
        #[arg(long, value_enum, default_value = "cim")]
        scheme: SchemeKind,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        nw: usize,
    },
    /// Delivered bits per second, `(1 - aber) * eta / ts`.
    Throughput {
        #[arg(long, value_enum, default_value = "cim")]
        scheme: SchemeKind,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        nw: usize,
        #[arg(long)]
        aber: f64,
        #[arg(long, default_value_t = 1.0)]
        ts: f64,
    },
    /// Energy saved by CIM relative to another scheme, in percent.
    Energy {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        nw: usize,
        #[arg(long, value_enum)]
        vs: VsKind,
        /// Transmit antennas of the spatial modulation comparator.
        #[arg(long)]
        nt: Option<usize>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl From<cimit::Error> for CliError {
    fn from(e: cimit::Error) -> Self {
        match e {
            cimit::Error::InvalidArgument(m) => CliError::Usage(m),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn io_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

fn read_image(path: &std::path::Path) -> Result<cimit::imaging::GrayImage, CliError> {
    let data = fs::read(path).map_err(|e| io_err(path, e))?;
    read_pgm(&data).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

fn write_file(path: &std::path::Path, data: &[u8]) -> Result<(), CliError> {
    fs::write(path, data).map_err(|e| io_err(path, e))
}

fn config_line() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn fmt_db(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.4}")
    }
}

fn cmd_ber(args: &BerArgs) -> Result<(), CliError> {
    let link = args.scheme.link()?;
    let mut cfg = SweepConfig::new(link, args.snr.0.clone());
    cfg.master_seed = args.seed;
    cfg.min_bit_errors = args.min_errors;
    cfg.max_bits = args.max_bits;
    cfg.symbol_time = args.ts;
    cfg.workers = args.workers;
    let result = run_ber_sweep(&cfg)?;
    write_file(&args.out, result.to_csv(Some(&config_line())).as_bytes())
}

fn cmd_send_image(args: &SendImageArgs) -> Result<(), CliError> {
    let link = args.scheme.link()?;
    let image = read_image(&args.input)?;
    let r = run_image_link_with(&image, link, args.snr, args.seed, args.workers)?;
    write_file(&args.out, &write_pgm(&r.received))?;
    if let Some(path) = &args.report {
        let csv = format!(
            "# config: {}\nber,psnr\n{:e},{}\n",
            config_line(),
            r.ber,
            fmt_db(r.psnr)
        );
        write_file(path, csv.as_bytes())?;
    }
    println!("ber={:e} psnr={}", r.ber, fmt_db(r.psnr));
    Ok(())
}

fn cmd_enhance(args: &EnhanceArgs) -> Result<(), CliError> {
    let element = match args.element {
        ElementShape::Square => StructuringElement::square(args.element_radius),
        ElementShape::Cross => StructuringElement::cross(args.element_radius),
    };
    let filter = match args.filter {
        FilterKind::Median => Filter::Median { radius: args.radius },
        FilterKind::Majority => Filter::Majority { radius: args.radius },
        FilterKind::Morph => Filter::Morph { element },
        FilterKind::Wiener => Filter::Wiener { window: args.window },
        FilterKind::Wavelet => Filter::Wavelet,
        FilterKind::Nlm => Filter::Nlm(NlmParams {
            patch_radius: args.patch,
            search_radius: args.search,
            h: args.h,
        }),
        FilterKind::Pipeline => Filter::Pipeline { radius: args.radius, element },
    };
    let image = read_image(&args.input)?;
    let out = filter.apply(&image)?;
    write_file(&args.out, &write_pgm(&out))?;
    if let Some(path) = &args.reference {
        let reference = read_image(path)?;
        let before = psnr(&reference, &image).map_err(|e| CliError::Runtime(e.to_string()))?;
        let after = psnr(&reference, &out).map_err(|e| CliError::Runtime(e.to_string()))?;
        println!("filter,psnr_in,psnr_out");
        println!("{},{},{}", filter.name(), fmt_db(before), fmt_db(after));
    }
    Ok(())
}

fn eta_of(scheme: SchemeKind, m: usize, nw: usize) -> Result<usize, CliError> {
    if !m.is_power_of_two() || m < 2 {
        return Err(usage(format!("--m {m} must be a power of two >= 2")));
    }
    Ok(match scheme {
        SchemeKind::Cim => spectral_efficiency(nw, m),
        SchemeKind::Qam | SchemeKind::Psk => m.trailing_zeros() as usize,
    })
}

fn cmd_metrics(metric: &MetricCommand) -> Result<(), CliError> {
    match *metric {
        MetricCommand::Eta { scheme, m, nw } => {
            println!("eta");
            println!("{}", eta_of(scheme, m, nw)?);
        }
        MetricCommand::Throughput { scheme, m, nw, aber, ts } => {
            let eta = eta_of(scheme, m, nw)?;
            let t = throughput(aber, eta as f64, ts)?;
            println!("eta,aber,ts,throughput");
            println!("{eta},{aber},{ts},{t}");
        }
        MetricCommand::Energy { m, nw, vs, nt } => {
            let eta = eta_of(SchemeKind::Cim, m, nw)?;
            let comparator = match vs {
                VsKind::Qam => Comparator::Qam,
                VsKind::Psk => Comparator::Psk,
                VsKind::Sm => Comparator::Sm {
                    n_t: nt.ok_or_else(|| usage("--nt is required for --vs sm"))?,
                },
            };
            let n_c = comparator_efficiency(comparator, m)?;
            let saving = energy_saving(n_c as f64, eta as f64)?;
            println!("eta,n_c,energy_saving_pct");
            println!("{eta},{n_c},{saving:.1}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Ber(a) => cmd_ber(a),
        Command::SendImage(a) => cmd_send_image(a),
        Command::Enhance(a) => cmd_enhance(a),
        Command::Metrics { metric } => cmd_metrics(metric),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
