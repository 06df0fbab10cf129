//! Command-line front end: generate instances, classify and transform
//! frame files, run perturbation certifications, and drive the full
//! verification suite.  Every command exits nonzero when a verification
//! fails, and OVPFRAME_TOL overrides the identity tolerance globally.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ovpframe::gen::{generate, GenSpec, Generated, Kind};
use ovpframe::io;
use ovpframe::verify::{verify_all, VerifyOptions};
use ovpframe_core::config::Config;
use ovpframe_core::dual::is_dual;
use ovpframe_core::frame::{FrameBounds, FramePair};
use ovpframe_core::norm::NormEstimate;
use ovpframe_core::perturb::{perturb_pair, PairParams};
use ovpframe_core::space::Exponent;
use ovpframe_core::transform::dilate;

#[derive(Parser)]
#[command(
    name = "ovpframe",
    version,
    about = "operator-valued frame calculus: generation, certification, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance and print (or save) its canonical JSON.
    Gen {
        /// generic | parseval | riesz | bessel_only | orthogonal_pair |
        /// approx_dual_pair | perturbation_family
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Sequence exponent (1 <= p < inf).
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Space dimensions as d,e.
        #[arg(long, default_value = "3,2", value_parser = parse_dims)]
        dims: Dims,
        /// Number of elements.
        #[arg(long = "N", default_value_t = 4)]
        n: usize,
        /// Coordinate exponent of X (number or "inf"); defaults to p.
        #[arg(long)]
        rx: Option<String>,
        /// Coordinate exponent of Y (number or "inf"); defaults to p.
        #[arg(long)]
        ry: Option<String>,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Classify a frame file and print its certified bounds.
    Check { file: PathBuf },
    /// Compute the canonical dual, or a family member from free parameters.
    Dual {
        file: PathBuf,
        /// JSON file {"U": [flat (N*e) x d], "V": [flat d x (N*e)]}.
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Extend a frame to a basis-like pair on a larger space.
    Dilate { file: PathBuf },
    /// Certify that the second pair inherits the frame property from the first.
    Perturb {
        file: PathBuf,
        other: PathBuf,
        /// Which of the four sum conditions to certify (1-4).
        #[arg(long, default_value_t = 1)]
        variant: u8,
    },
    /// Run the verification suite and report per-check outcomes.
    VerifyAll {
        /// Restrict to a single check id.
        #[arg(long)]
        only: Option<String>,
        /// Random instances per check.
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Also write the canonical JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy)]
struct Dims {
    d: usize,
    e: usize,
}

fn parse_dims(text: &str) -> Result<Dims, String> {
    let (d, e) = text
        .split_once(',')
        .ok_or_else(|| format!("expected d,e (two comma-separated integers), got \"{text}\""))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("expected a positive integer, got \"{s}\""))
    };
    Ok(Dims { d: parse(d)?, e: parse(e)? })
}

fn parse_exponent(text: &str) -> Result<Exponent, String> {
    if text == "inf" {
        return Ok(Exponent::Inf);
    }
    let v: f64 = text
        .parse()
        .map_err(|_| format!("expected a number or \"inf\", got \"{text}\""))?;
    Ok(Exponent::Finite(v))
}

/// Default configuration, with the identity tolerance overridable through
/// the OVPFRAME_TOL environment variable.
fn config() -> Result<Config, String> {
    let mut cfg = Config {
        norm_restarts: 48,
        norm_steps: 64,
        norm_stall: 16,
        sample_budget: 96,
        ..Config::default()
    };
    if let Ok(text) = std::env::var("OVPFRAME_TOL") {
        let tol: f64 = text
            .parse()
            .map_err(|_| format!("OVPFRAME_TOL must be a number, got \"{text}\""))?;
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(format!("OVPFRAME_TOL must be positive and finite, got {tol}"));
        }
        cfg.identity_tol = tol;
    }
    Ok(cfg)
}

fn read_frame(path: &Path) -> Result<FramePair, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| format!("cannot read {}: {err}", path.display()))?;
    io::frame_from_json(&text).map_err(|err| format!("{}: {err}", path.display()))
}

/// Writes to stdout, exiting quietly if the reader closed the pipe early
/// (the panic the default print macros raise is useless noise downstream
/// of `head` and friends).
fn print_text(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|()| out.flush()).is_err() {
        std::process::exit(0);
    }
}

fn print_line(text: &str) {
    print_text(text);
    print_text("\n");
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|err| format!("cannot write {}: {err}", path.display())),
        None => {
            print_text(text);
            Ok(())
        }
    }
}

fn fmt_estimate(est: &NormEstimate) -> String {
    format!(
        "{{\"exact\":{},\"lower\":{},\"upper\":{}}}",
        est.exact,
        io::fmt_f64(est.lower),
        io::fmt_f64(est.upper)
    )
}

fn fmt_bounds(bounds: &FrameBounds) -> String {
    format!(
        "{{\"analysis\":{},\"lower\":{},\"synthesis\":{},\"upper\":{}}}",
        fmt_estimate(&bounds.analysis),
        fmt_estimate(&bounds.lower),
        fmt_estimate(&bounds.synthesis),
        fmt_estimate(&bounds.upper)
    )
}

fn run_gen(
    kind: &str,
    seed: u64,
    p: f64,
    dims: Dims,
    n: usize,
    rx: &Option<String>,
    ry: &Option<String>,
    out: &Option<PathBuf>,
    cfg: &Config,
) -> Result<bool, String> {
    let kind = Kind::parse(kind).ok_or_else(|| {
        format!(
            "unknown kind \"{kind}\"; valid kinds: {}",
            Kind::ALL.map(|k| k.name()).join(", ")
        )
    })?;
    let mut spec = GenSpec::new(seed, p, dims.d, dims.e, n, kind);
    if let Some(text) = rx {
        spec.rx = parse_exponent(text)?;
    }
    if let Some(text) = ry {
        spec.ry = parse_exponent(text)?;
    }
    let text = match generate(&spec, cfg).map_err(|err| err.to_string())? {
        Generated::Single(f) => format!("{}\n", io::frame_to_json(&f)),
        Generated::Couple(f, g) => format!("{}\n", io::couple_to_json(&f, &g)),
    };
    emit(out, &text)?;
    Ok(true)
}

fn run_check(file: &Path, cfg: &Config) -> Result<bool, String> {
    let f = read_frame(file)?;
    let class = f.classify(cfg);
    let bounds = f.bounds(cfg);
    print_line(&format!(
        "{{\"bessel\":{},\"bounds\":{},\"elements\":{},\"frame\":{},\"p\":{},\"parseval\":{},\"parseval_residual\":{},\"riesz\":{},\"riesz_residual\":{},\"smallest_pivot\":{},\"strongest\":\"{}\"}}",
        class.bessel,
        fmt_bounds(&bounds),
        f.len(),
        class.frame,
        io::fmt_f64(f.p()),
        class.parseval,
        io::fmt_f64(class.parseval_residual),
        class.riesz,
        io::fmt_f64(class.riesz_residual),
        io::fmt_f64(class.smallest_pivot),
        class.strongest()
    ));
    Ok(true)
}

fn run_dual(file: &Path, params: &Option<PathBuf>, cfg: &Config) -> Result<bool, String> {
    let f = read_frame(file)?;
    let dual = match params {
        None => f.canonical_dual(cfg).map_err(|err| err.to_string())?,
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|err| format!("cannot read {}: {err}", path.display()))?;
            let (u, v) = io::params_from_json(&text, f.len() * f.y().dim, f.x().dim)
                .map_err(|err| format!("{}: {err}", path.display()))?;
            ovpframe_core::dual::dual_from_params(&f, &u, &v, cfg)
                .map_err(|err| err.to_string())?
        }
    };
    let cert = is_dual(&f, &dual, cfg).map_err(|err| err.to_string())?;
    print_line(&format!(
        "{{\"certificate\":{{\"candidate_invertible\":{},\"candidate_pivot\":{},\"identities_hold\":{},\"residual_left\":{},\"residual_right\":{}}},\"dual\":{}}}",
        cert.candidate_invertible,
        io::fmt_f64(cert.candidate_pivot),
        cert.identities_hold,
        io::fmt_f64(cert.residual_left),
        io::fmt_f64(cert.residual_right),
        io::frame_to_json(&dual)
    ));
    Ok(cert.identities_hold)
}

fn run_dilate(file: &Path, cfg: &Config) -> Result<bool, String> {
    let f = read_frame(file)?;
    let dilation = dilate(&f, cfg).map_err(|err| err.to_string())?;
    print_line(&io::dilation_to_json(&dilation));
    Ok(true)
}

fn run_perturb(file: &Path, other: &Path, variant: u8, cfg: &Config) -> Result<bool, String> {
    let f = read_frame(file)?;
    let g = read_frame(other)?;
    let cert = perturb_pair(&f, &g, PairParams::Auto, variant, cfg)
        .map_err(|err| err.to_string())?;
    print_line(&format!(
        "{{\"alpha\":{},\"beta\":{},\"composite_invertible\":{},\"composite_pivot\":{},\"conclusion_frame\":{},\"frame_pivot\":{},\"gamma\":{},\"hypothesis_ok\":{},\"params_certified\":{},\"proven_composite\":\"{}\",\"r\":{},\"s\":{},\"t\":{},\"upper_bound\":{},\"upper_bound_formula\":\"((1+alpha)*synthesis+gamma)/(1-beta) * ((1+r)*analysis+t)/(1-s)\",\"upper_bound_holds\":{},\"variant\":{},\"variant_ok\":{},\"variant_sum\":{}}}",
        io::fmt_f64(cert.alpha),
        io::fmt_f64(cert.beta),
        cert.composite_invertible,
        io::fmt_f64(cert.composite_pivot),
        cert.conclusion_frame,
        io::fmt_f64(cert.frame_pivot),
        io::fmt_f64(cert.gamma),
        cert.hypothesis_ok,
        cert.params_certified,
        cert.proven_composite,
        io::fmt_f64(cert.r),
        io::fmt_f64(cert.s),
        io::fmt_f64(cert.t),
        io::fmt_f64(cert.upper_bound),
        cert.upper_bound_holds,
        cert.variant,
        cert.variant_ok,
        io::fmt_f64(cert.variant_sum)
    ));
    Ok(cert.hypothesis_ok && cert.conclusion_frame && cert.upper_bound_holds)
}

fn run_verify_all(
    only: &Option<String>,
    instances: usize,
    seed: u64,
    json: &Option<PathBuf>,
    cfg: &Config,
) -> Result<bool, String> {
    let opts = VerifyOptions { seed, instances, only: only.clone() };
    let report = verify_all(&opts, cfg).map_err(|err| err.to_string())?;
    print_text(&report.render_text());
    if let Some(path) = json {
        std::fs::write(path, report.to_json())
            .map_err(|err| format!("cannot write {}: {err}", path.display()))?;
    }
    Ok(report.failures() == 0)
}

fn run() -> Result<bool, String> {
    let cli = Cli::parse();
    let cfg = config()?;
    match &cli.command {
        Command::Gen { kind, seed, p, dims, n, rx, ry, out } => {
            run_gen(kind, *seed, *p, *dims, *n, rx, ry, out, &cfg)
        }
        Command::Check { file } => run_check(file, &cfg),
        Command::Dual { file, params } => run_dual(file, params, &cfg),
        Command::Dilate { file } => run_dilate(file, &cfg),
        Command::Perturb { file, other, variant } => run_perturb(file, other, *variant, &cfg),
        Command::VerifyAll { only, instances, seed, json } => {
            run_verify_all(only, *instances, *seed, json, &cfg)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
