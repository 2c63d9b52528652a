use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sturmian_core::greens1d::{g_block, gauge_shift, Variant};
use sturmian_core::greens2d::{convolve, ConvolutionOptions};
use sturmian_core::matfile::MatrixFile;
use sturmian_core::verify::{verify, Suite, VerifyOptions};
use sturmian_core::{derive_params, Complex64, Error, PhysicalParams};

mod config;

use config::RunConfig;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Parabolic-Sturmian Green's matrices of one- and two-dimensional Coulomb
/// operators. Set RAYON_NUM_THREADS to limit the worker threads.
#[derive(Debug, Parser)]
#[command(name = "sturmian", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print ζ, λ, γ, θ, χ and the τ map for a parameter point.
    DeriveParams(Flags),
    /// Write the N×N ξ or η Green's block.
    Greens1d(Flags),
    /// Write the N²×N² two-dimensional Green's block.
    Greens2d(Flags),
    /// Run verification suites and print a JSON report.
    Verify(Flags),
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// t₀ of the two-dimensional operator (defaults to --t).
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    #[arg(long = "C", allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Block order.
    #[arg(long = "N")]
    pub order: Option<usize>,
    #[arg(long, value_parser = parse_variant)]
    pub variant: Option<Variant>,
    /// Shift q → q + y p of the second solution.
    #[arg(long = "gauge-y", allow_hyphen_values = true)]
    pub gauge_y: Option<f64>,
    /// Suites to run (repeat or separate with commas); all when omitted.
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<String>,
    /// Exclusion half-widths for the ε-extrapolated principal value; selects that route.
    #[arg(long = "pv-eps", value_delimiter = ',')]
    pub pv_eps: Option<Vec<f64>>,
    /// Cutoff of the exponentially decaying quadrature tails.
    #[arg(long = "tail-T")]
    pub tail_t: Option<f64>,
    /// Gauss–Legendre nodes per panel.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Drop the half-residue term of the 2D convolution (negative control).
    #[arg(long = "ablate-pole-term")]
    pub ablate_pole_term: bool,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    match s {
        "xi" => Ok(Variant::Xi),
        "eta" => Ok(Variant::Eta),
        _ => Err(format!("expected xi or eta, got {s:?}")),
    }
}

enum Failure {
    Verification,
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn resolve(flags: &Flags) -> Result<RunConfig, Error> {
    let base = match &flags.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    base.overlay(flags)
}

fn emit(out: &Option<PathBuf>, write: impl FnOnce(&mut dyn Write) -> Result<(), Error>) -> Result<(), Error> {
    let io_err = |e: io::Error| Error::Domain(format!("cannot write output: {e}"));
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::Domain(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush().map_err(io_err)
        }
        None => {
            let mut buf = Vec::new();
            write(&mut buf)?;
            let mut w = io::stdout().lock();
            match w.write_all(&buf).and_then(|_| w.flush()) {
                // a reader such as `head` closing the pipe early is not an error
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(io_err),
            }
        }
    }
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    emit(out, |w| writeln!(w, "{text}").map_err(|e| Error::Domain(e.to_string())))
}

#[derive(Serialize)]
struct DerivedReport {
    params: PhysicalParams,
    root: f64,
    zeta: Complex64,
    lambda: Complex64,
    gamma: Complex64,
    theta: Complex64,
    chi: Complex64,
    tau_map: &'static str,
    tau: Complex64,
    wronskian_constant: Complex64,
}

fn derive_cmd(cfg: &RunConfig) -> Result<(), Failure> {
    let p = cfg.params()?;
    let d = derive_params(&p)?;
    let report = DerivedReport {
        params: p,
        root: d.root,
        zeta: d.zeta,
        lambda: d.lambda,
        gamma: d.gamma,
        theta: d.theta,
        chi: d.chi,
        tau_map: "tau(t) = (2t + i(1 - root)) / (2 root), root = sqrt(1 - 2C/k^2)",
        tau: d.tau_of(p.t),
        wronskian_constant: d.wronskian_constant(),
    };
    emit_json(&cfg.out, &report)?;
    Ok(())
}

fn greens1d_cmd(cfg: &RunConfig) -> Result<(), Failure> {
    let p = cfg.params()?;
    let order = cfg.order.unwrap_or(10);
    let mut block = g_block(&p, order, cfg.variant.unwrap_or(Variant::Xi))?;
    if let Some(y) = cfg.gauge_y {
        block = gauge_shift(&block, Complex64::new(y, 0.0))?;
    }
    let file = MatrixFile::from_block1d(&block);
    emit(&cfg.out, |w| file.write_to(w))?;
    Ok(())
}

fn greens2d_cmd(cfg: &RunConfig) -> Result<(), Failure> {
    let p = cfg.params_2d()?;
    let order = cfg.order.unwrap_or(4);
    let options = ConvolutionOptions {
        pole_term: !cfg.ablate_pole_term.unwrap_or(false),
        eta_gauge: Complex64::new(cfg.gauge_y.unwrap_or(0.0), 0.0),
        unit_eta: false,
    };
    let block = convolve(&p, order, &cfg.quadrature(), &options)?;
    let file = MatrixFile::from_block2d(&block);
    emit(&cfg.out, |w| file.write_to(w))?;
    Ok(())
}

fn verify_cmd(cfg: &RunConfig) -> Result<(), Failure> {
    let suites = cfg.suites.clone().unwrap_or_else(|| Suite::ALL.to_vec());
    let uses_2d = suites.iter().any(|s| matches!(s, Suite::Inverse2d));
    let params = if uses_2d { cfg.params_2d()? } else { cfg.params()? };
    let options = VerifyOptions {
        params,
        order: cfg.order,
        quadrature: cfg.quadrature(),
        gauge_y: cfg.gauge_y.unwrap_or(0.0),
        ablate_pole_term: cfg.ablate_pole_term.unwrap_or(false),
    };
    let report = verify(&suites, &options)?;
    emit_json(&cfg.out, &report)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (flags, run): (&Flags, fn(&RunConfig) -> Result<(), Failure>) = match &cli.command {
        Command::DeriveParams(f) => (f, derive_cmd),
        Command::Greens1d(f) => (f, greens1d_cmd),
        Command::Greens2d(f) => (f, greens2d_cmd),
        Command::Verify(f) => (f, verify_cmd),
    };
    let outcome = resolve(flags).map_err(Failure::Lib).and_then(|cfg| run(&cfg));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(EXIT_VERIFY_FAILED)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_VALIDATION })
        }
    }
}
