//! Batch front door for the Gribov-operator laboratory.
//!
//! Six report-producing subcommands (spectrum, trace, corrections,
//! determinant, bounds, sturm) plus `describe`, which documents every
//! column. Identical resolved configurations produce byte-identical
//! reports.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Layers, MRange, OutputFormat, ResolvedConfig};

#[derive(Parser)]
#[command(
    name = "gribov-lab",
    version,
    about = "Spectra, contour corrections and regularized trace residuals of the magic Gribov operator"
)]
struct Cli {
    /// Flat key=value configuration file (default: $GRIBOV_LAB_CONFIG).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct CommonArgs {
    /// lambda'' — the magic coupling in front of G = a*^3 a^3.
    #[arg(long = "lambda2")]
    lambda2: Option<f64>,
    /// mu — the Pomeron intercept in front of a*a.
    #[arg(long)]
    mu: Option<f64>,
    /// lambda — the triple coupling in front of i a*(a + a*)a.
    #[arg(long)]
    lambda: Option<f64>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output path (default: standard output).
    #[arg(long)]
    output: Option<String>,
    /// Seed for randomized checks; embedded in the report.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Default)]
struct SweepArgs {
    /// Contour indices: 'a..b' (inclusive), a comma list, or one value.
    #[arg(long)]
    m: Option<String>,
    /// Quadrature nodes per contour (power of two, >= 16).
    #[arg(long)]
    nodes: Option<usize>,
    /// Number of correction orders j = 1..j_max.
    #[arg(long = "j-max")]
    j_max: Option<usize>,
    /// Truncation policy factor: N(m) = max(factor*m, m + floor).
    #[arg(long = "dim-factor")]
    dim_factor: Option<usize>,
    /// Truncation policy floor.
    #[arg(long = "dim-floor")]
    dim_floor: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of one truncation of H with residual certificates.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// Truncation dimension (basis states 1..=dim).
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Regularized trace residuals over a sweep of contours gamma_m.
    Trace {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Correction integrals in long format (one row per m and j).
    Corrections {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Perturbation determinant at a point or along a contour.
    Determinant {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Real part of the evaluation point sigma.
        #[arg(long = "sigma-re")]
        sigma_re: Option<f64>,
        /// Imaginary part of sigma (default 0).
        #[arg(long = "sigma-im")]
        sigma_im: Option<f64>,
        /// Truncation dimension.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Inequality and decay checks (see `describe` for the catalog).
    Bounds {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Which check to run.
        #[arg(long)]
        check: Option<String>,
        /// Sample count for randomized checks.
        #[arg(long)]
        samples: Option<usize>,
        /// Scan cutoff (basis index or pair bound, check-specific).
        #[arg(long = "n-max")]
        n_max: Option<usize>,
    },
    /// Gelfand-Levitan trace-sum oracle for the Neumann problem.
    Sturm {
        #[command(flatten)]
        common: CommonArgs,
        /// Potential: zero, cos2x, or linear_centered.
        #[arg(long)]
        potential: Option<String>,
        /// Comma-separated grid sizes, increasing (at least two).
        #[arg(long)]
        grids: Option<String>,
        /// Number of eigenvalue pairs in the trace sum.
        #[arg(long = "n-max")]
        n_max: Option<usize>,
    },
    /// Print the report schemas and configuration keys.
    Describe,
}

struct CliError {
    code: u8,
    kind: String,
    message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            kind: "InvalidParameters".into(),
            message: message.into(),
        }
    }
}

impl From<gribov_lab::Error> for CliError {
    fn from(e: gribov_lab::Error) -> Self {
        use gribov_lab::Error as E;
        let (code, kind) = match &e {
            E::DomainError(_) => (2, "InvalidParameters"),
            E::PoleCollision { .. } => (3, "PoleCollision"),
            E::NoConvergence(_) => (3, "NoConvergence"),
            E::CountMismatch { .. } => (3, "CountMismatch"),
            E::StructureMismatch(_) => (3, "StructureMismatch"),
            E::QuadratureNotConverged { .. } => (3, "QuadratureNotConverged"),
        };
        Self {
            code,
            kind: kind.into(),
            message: e.to_string(),
        }
    }
}

fn parse_flag<T: std::str::FromStr>(
    flag: &Option<String>,
    name: &str,
) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    match flag {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|e| CliError::invalid(format!("--{name}: {e}"))),
    }
}

fn parse_grids(raw: &str) -> Result<Vec<usize>, String> {
    let grids: Result<Vec<usize>, _> = raw.split(',').map(|t| t.trim().parse()).collect();
    let grids = grids.map_err(|e| format!("bad grid list: {e}"))?;
    if grids.len() < 2 {
        return Err("need at least two grids".into());
    }
    Ok(grids)
}

fn resolve_common(
    layers: &Layers,
    common: &CommonArgs,
    config: &mut ResolvedConfig,
) -> Result<(), CliError> {
    config.lambda2 = layers
        .resolve(common.lambda2, "lambda2", config.lambda2)
        .map_err(CliError::invalid)?;
    config.mu = layers
        .resolve(common.mu, "mu", config.mu)
        .map_err(CliError::invalid)?;
    config.lambda = layers
        .resolve(common.lambda, "lambda", config.lambda)
        .map_err(CliError::invalid)?;
    let format_flag: Option<OutputFormat> = parse_flag(&common.format, "format")?;
    config.format = layers
        .resolve(format_flag, "format", config.format)
        .map_err(CliError::invalid)?;
    config.output = layers
        .resolve_optional(common.output.clone(), "output")
        .map_err(CliError::invalid)?;
    config.seed = layers
        .resolve(common.seed, "seed", config.seed)
        .map_err(CliError::invalid)?;
    Ok(())
}

fn resolve_sweep(
    layers: &Layers,
    sweep: &SweepArgs,
    config: &mut ResolvedConfig,
) -> Result<(), CliError> {
    let m_flag: Option<MRange> = parse_flag(&sweep.m, "m")?;
    config.m_values = layers
        .resolve_optional(m_flag, "m")
        .map_err(CliError::invalid)?
        .map(|r| r.0);
    config.nodes = layers
        .resolve(sweep.nodes, "nodes", config.nodes)
        .map_err(CliError::invalid)?;
    config.j_max = layers
        .resolve(sweep.j_max, "j_max", config.j_max)
        .map_err(CliError::invalid)?;
    config.dim_factor = layers
        .resolve(sweep.dim_factor, "dim_factor", config.dim_factor)
        .map_err(CliError::invalid)?;
    config.dim_floor = layers
        .resolve(sweep.dim_floor, "dim_floor", config.dim_floor)
        .map_err(CliError::invalid)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let layers = Layers::new(cli.config.as_deref()).map_err(CliError::invalid)?;
    let (config, report) = match &cli.command {
        Command::Describe => {
            print!("{}", commands::describe());
            return Ok(());
        }
        Command::Spectrum { common, dim } => {
            let mut config = ResolvedConfig::new("spectrum");
            resolve_common(&layers, common, &mut config)?;
            config.dim = layers
                .resolve_optional(*dim, "dim")
                .map_err(CliError::invalid)?;
            let report = commands::run_spectrum(&config)?;
            (config, report)
        }
        Command::Trace { common, sweep } => {
            let mut config = ResolvedConfig::new("trace");
            resolve_common(&layers, common, &mut config)?;
            resolve_sweep(&layers, sweep, &mut config)?;
            let report = commands::run_trace(&config)?;
            (config, report)
        }
        Command::Corrections { common, sweep } => {
            let mut config = ResolvedConfig::new("corrections");
            resolve_common(&layers, common, &mut config)?;
            resolve_sweep(&layers, sweep, &mut config)?;
            let report = commands::run_corrections(&config)?;
            (config, report)
        }
        Command::Determinant {
            common,
            sweep,
            sigma_re,
            sigma_im,
            dim,
        } => {
            let mut config = ResolvedConfig::new("determinant");
            resolve_common(&layers, common, &mut config)?;
            resolve_sweep(&layers, sweep, &mut config)?;
            config.sigma_re = layers
                .resolve_optional(*sigma_re, "sigma_re")
                .map_err(CliError::invalid)?;
            config.sigma_im = layers
                .resolve_optional(*sigma_im, "sigma_im")
                .map_err(CliError::invalid)?;
            config.dim = layers
                .resolve_optional(*dim, "dim")
                .map_err(CliError::invalid)?;
            let report = commands::run_determinant(&config)?;
            (config, report)
        }
        Command::Bounds {
            common,
            sweep,
            check,
            samples,
            n_max,
        } => {
            let mut config = ResolvedConfig::new("bounds");
            resolve_common(&layers, common, &mut config)?;
            resolve_sweep(&layers, sweep, &mut config)?;
            config.check = layers
                .resolve_optional(check.clone(), "check")
                .map_err(CliError::invalid)?;
            config.samples = layers
                .resolve_optional(*samples, "samples")
                .map_err(CliError::invalid)?;
            config.n_max = layers
                .resolve_optional(*n_max, "n_max")
                .map_err(CliError::invalid)?;
            let report = commands::run_bounds(&config)?;
            (config, report)
        }
        Command::Sturm {
            common,
            potential,
            grids,
            n_max,
        } => {
            let mut config = ResolvedConfig::new("sturm");
            resolve_common(&layers, common, &mut config)?;
            config.potential = layers
                .resolve_optional(potential.clone(), "potential")
                .map_err(CliError::invalid)?;
            let grids_flag: Option<String> = grids.clone();
            let grids_raw = layers
                .resolve_optional(grids_flag, "grids")
                .map_err(CliError::invalid)?;
            config.grids = match grids_raw {
                Some(raw) => Some(parse_grids(&raw).map_err(CliError::invalid)?),
                None => None,
            };
            config.n_max = layers
                .resolve_optional(*n_max, "n_max")
                .map_err(CliError::invalid)?;
            let report = commands::run_sturm(&config)?;
            (config, report)
        }
    };
    let text = report.render(&config);
    output::emit(&text, config.output.as_deref()).map_err(|e| CliError {
        code: 2,
        kind: "Io".into(),
        message: format!("cannot write output: {e}"),
    })?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let obj = serde_json::json!({
                "error": { "kind": e.kind, "message": e.message }
            });
            eprintln!("{obj}");
            ExitCode::from(e.code)
        }
    }
}
