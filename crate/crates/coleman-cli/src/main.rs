//! Command-line driver for the verification suites. Exit codes: 0 when all
//! checks pass, 1 on any failed check, 2 on usage or precondition errors.

mod battery;
mod output;

use clap::{Args, Parser, Subcommand};
use output::{Format, ReportFile, ReportRow};
use serde::Deserialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "coleman", version, about = "Verification batteries for free-fermion / sine-Gordon identities")]
struct Cli {
    /// Optional TOML file mirroring the flags (explicit flags win)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format (json or csv)
    #[arg(long, global = true)]
    format: Option<String>,

    /// Worker threads for the battery
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Include wall-clock timings in the report (breaks byte-level
    /// reproducibility across runs)
    #[arg(long, global = true, default_value_t = false)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Massless Coleman correspondence battery over seeded random
    /// configurations
    Bosonize(BosonizeArgs),
    /// Finite-volume Dirac Green's function battery
    Diskgreen(DiskArgs),
    /// Sine-Gordon propagator scans and bubble checks
    Sgprop(SgArgs),
    /// Renormalized-potential battery
    Renpot(RenpotArgs),
    /// Special-function golden-value table
    Tables,
}

#[derive(Args, Debug)]
struct BosonizeArgs {
    /// RNG seed (required: configurations are random)
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random configurations
    #[arg(long)]
    configs: Option<usize>,
    /// Relative tolerance per configuration
    #[arg(long)]
    tol: Option<f64>,
    /// Explicit points "x0,x1;x0,x1;..." for a single (+,-) pair check
    /// instead of the random battery
    #[arg(long)]
    points: Option<String>,
}

#[derive(Args, Debug)]
struct DiskArgs {
    #[arg(long, default_value_t = 2.0)]
    l: f64,
    #[arg(long, default_value_t = 0.5)]
    mu: f64,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of seeded interior point pairs for the Dirac residual
    #[arg(long, default_value_t = 10)]
    pairs: usize,
    /// Angular and radial series truncation
    #[arg(long, default_value_t = 64)]
    n_max: u32,
    #[arg(long, default_value_t = 64)]
    k_max: u32,
    /// Comma-separated radii for the infinite-volume convergence table
    #[arg(long, value_delimiter = ',')]
    l_list: Vec<f64>,
    /// Grid resolution of the resolvent quadrature
    #[arg(long, default_value_t = 48)]
    resolvent_grid: usize,
}

#[derive(Args, Debug)]
struct SgArgs {
    /// Mass scale mu of the Fourier covariance
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Sample count of the |p|/mu scan
    #[arg(long, default_value_t = 50)]
    scan: usize,
    /// Also emit the position-space Hankel back-transform at these radii
    #[arg(long, value_delimiter = ',')]
    hankel: Vec<f64>,
}

#[derive(Args, Debug)]
struct RenpotArgs {
    /// Coupling beta (defaults to 4 pi)
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    m: f64,
    /// t-grid for the norm slope fit
    #[arg(long, value_delimiter = ',')]
    t_grid: Vec<f64>,
    /// Monte Carlo samples per grid point
    #[arg(long, default_value_t = 4000)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
}

/// TOML mirror of the global flags and common battery knobs.
#[derive(Debug, Default, Deserialize)]
struct FileConfig {
    out: Option<PathBuf>,
    format: Option<String>,
    threads: Option<usize>,
    seed: Option<u64>,
    configs: Option<usize>,
    tol: Option<f64>,
}

fn parse_points(s: &str) -> Result<Vec<coleman::ComplexPoint>, String> {
    s.split(';')
        .map(|pair| {
            let mut it = pair.split(',');
            let x0: f64 = it
                .next()
                .ok_or("missing x0")?
                .trim()
                .parse()
                .map_err(|e| format!("bad x0: {e}"))?;
            let x1: f64 = it
                .next()
                .ok_or("missing x1")?
                .trim()
                .parse()
                .map_err(|e| format!("bad x1: {e}"))?;
            Ok(coleman::ComplexPoint::new(x0, x1))
        })
        .collect()
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_cfg: FileConfig = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match toml::from_str(&text) {
                Ok(cfg) => cfg,
                Err(e) => return usage_error(&format!("bad config file: {e}")),
            },
            Err(e) => return usage_error(&format!("cannot read config file: {e}")),
        },
        None => FileConfig::default(),
    };
    // explicit flags win over the file values
    let format_str = cli
        .format
        .clone()
        .or(file_cfg.format.clone())
        .unwrap_or_else(|| "json".into());
    let format: Format = match format_str.parse() {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let out = cli.out.clone().or(file_cfg.out.clone());
    let threads = cli.threads.or(file_cfg.threads).unwrap_or(1);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return usage_error(&format!("thread pool: {e}")),
    };

    let run = || -> Result<(String, Option<u64>, f64, Vec<coleman::CheckReport>), String> {
        match &cli.command {
            Command::Bosonize(args) => {
                if let Some(pts) = &args.points {
                    let pts = parse_points(pts)?;
                    if pts.len() != 2 {
                        return Err("explicit mode expects exactly two points (one +, one -)".into());
                    }
                    let cfg = coleman::bosonize::CorrespondenceConfig {
                        plus_charges: vec![pts[0]],
                        minus_charges: vec![pts[1]],
                        holo_currents: vec![],
                        antiholo_currents: vec![],
                    };
                    cfg.validate().map_err(|e| e.to_string())?;
                    let tol = args.tol.unwrap_or(1e-10);
                    let rep =
                        coleman::bosonize::coleman_check_z0(&cfg, tol).map_err(|e| e.to_string())?;
                    return Ok(("bosonize".into(), None, tol, vec![rep]));
                }
                let seed = args.seed.or(file_cfg.seed).ok_or("--seed is required")?;
                let configs = args.configs.or(file_cfg.configs).unwrap_or(50);
                let tol = args.tol.or(file_cfg.tol).unwrap_or(1e-10);
                let rows =
                    battery::bosonize_battery(seed, configs, tol).map_err(|e| e.to_string())?;
                Ok(("bosonize".into(), Some(seed), tol, rows))
            }
            Command::Diskgreen(args) => {
                let seed = args.seed.or(file_cfg.seed).ok_or("--seed is required")?;
                let params = battery::DiskParams {
                    l: args.l,
                    mu: args.mu,
                    seed,
                    pairs: args.pairs,
                    n_max: args.n_max,
                    k_max: args.k_max,
                    l_list: args.l_list.clone(),
                    resolvent_grid: args.resolvent_grid,
                };
                if params.l < 1.0 {
                    return Err("disk radius must satisfy L >= 1".into());
                }
                let rows = battery::diskgreen_battery(&params).map_err(|e| e.to_string())?;
                Ok(("diskgreen".into(), Some(seed), 1e-4, rows))
            }
            Command::Sgprop(args) => {
                if args.mu == 0.0 {
                    return Err("sgprop needs mu != 0".into());
                }
                let mut rows =
                    battery::sgprop_battery(args.mu, args.scan).map_err(|e| e.to_string())?;
                if !args.hankel.is_empty() {
                    rows.extend(
                        battery::sgprop_hankel_rows(args.mu, &args.hankel)
                            .map_err(|e| e.to_string())?,
                    );
                }
                Ok(("sgprop".into(), None, 1e-5, rows))
            }
            Command::Renpot(args) => {
                let seed = args.seed.or(file_cfg.seed).ok_or("--seed is required")?;
                let params = battery::RenpotParams {
                    beta: args.beta.unwrap_or(4.0 * std::f64::consts::PI),
                    epsilon: args.epsilon,
                    m: args.m,
                    t_grid: if args.t_grid.is_empty() {
                        vec![0.1, 0.2, 0.4]
                    } else {
                        args.t_grid.clone()
                    },
                    samples: args.samples,
                    seed,
                };
                let rows = battery::renpot_battery(&params).map_err(|e| e.to_string())?;
                Ok(("renpot".into(), Some(seed), 0.15, rows))
            }
            Command::Tables => {
                let rows = battery::tables_battery().map_err(|e| e.to_string())?;
                Ok(("tables".into(), None, 1e-11, rows))
            }
        }
    };

    let (command, seed, tol, rows) = match pool.install(run) {
        Ok(v) => v,
        Err(msg) => return usage_error(&msg),
    };
    let all_pass = rows.iter().all(|r| r.pass);
    let report = ReportFile {
        schema: output::SCHEMA_VERSION,
        command,
        seed,
        tolerance: tol,
        pass: all_pass,
        rows: rows
            .iter()
            .map(|r| ReportRow::from_check(r, cli.timings))
            .collect(),
    };
    if let Err(e) = output::write_report(&report, format, out.as_deref()) {
        return usage_error(&format!("cannot write report: {e}"));
    }
    eprintln!(
        "{}: {} checks, {}",
        report.command,
        report.rows.len(),
        if all_pass { "all pass" } else { "FAILURES" }
    );
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
