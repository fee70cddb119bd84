use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use fbwm_core::pipeline::{DEFAULT_M, DEFAULT_THRESHOLD};
use fbwm_core::{
    analyze_consistency, ci_table, divide_samples, solve_problem, Fpcs, GridSpec, PipelineError, Problem,
    SolverOptions, Tfn,
};
use fbwm_service::ServiceConfig;
use serde::Serialize;

mod render;

#[derive(Parser)]
#[command(name = "fbwm", version, about = "Fuzzy best-worst weights from linguistic judgments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for interval and midpoint weights.
    Solve {
        input: PathBuf,
        /// Number of uniform α levels.
        #[arg(long, conflicts_with = "grid")]
        m: Option<usize>,
        /// Explicit α levels, comma separated; must include 0 and 1.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long)]
        seed: Option<u64>,
        /// Bisection tolerance on ε.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Check necessary consistency conditions and bound the consistency ratio.
    Consistency {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_M)]
        grid_points: usize,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print consistency-index lower bounds for every best-to-worst judgment.
    CiTable {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Sample exact and approximate memberships of a triangular quotient as CSV.
    Divide {
        /// Numerator as `a,b,c`.
        #[arg(allow_hyphen_values = true)]
        numerator: String,
        /// Denominator as `a,b,c`; its support must exclude zero.
        #[arg(allow_hyphen_values = true)]
        denominator: String,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// Run the HTTP API.
    Serve {
        /// Listening port; the `PORT` environment variable takes precedence.
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Directory with the browser client, served at `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

/// Exit status 2 for bad input, 3 for solver failures.
enum Failure {
    Input(anyhow::Error),
    Solver(anyhow::Error),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        if matches!(e, PipelineError::Solver(_)) {
            Failure::Solver(e.into())
        } else {
            Failure::Input(e.into())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            input,
            m,
            grid,
            seed,
            tol,
            format,
        } => {
            let problem = read_input(&input, Problem::from_json_str)?;
            let grid = GridSpec::from_parts(m, grid)?;
            let mut opts = SolverOptions::default();
            if let Some(seed) = seed {
                opts.seed = seed;
            }
            if let Some(tol) = tol {
                opts.optimality_tol = tol;
            }
            let report = solve_problem(&problem, &grid, &opts)?;
            emit(format, &report, || render::problem(&report))
        }
        Command::Consistency {
            input,
            grid_points,
            threshold,
            format,
        } => {
            let fpcs = read_input(&input, Fpcs::from_json_str)?;
            let report = analyze_consistency(
                &fpcs,
                &GridSpec::Uniform(grid_points),
                &SolverOptions::default(),
                Some(threshold),
            );
            match report {
                Ok(r) => emit(format, &r, || render::consistency(&r)),
                Err(PipelineError::Degenerate) => {
                    // Nothing to bound, but the conditions are still worth listing.
                    let grid = GridSpec::Uniform(grid_points).build()?;
                    let r = fbwm_core::check_conditions(&fpcs, &grid);
                    emit(format, &r, || render::consistency(&r))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::CiTable { format } => {
            let rows = ci_table();
            emit(format, &rows, || render::ci_table(&rows))
        }
        Command::Divide {
            numerator,
            denominator,
            samples,
        } => {
            let num = parse_tfn(&numerator).map_err(Failure::Input)?;
            let den = parse_tfn(&denominator).map_err(Failure::Input)?;
            let rows = divide_samples(&num, &den, samples).map_err(|e| Failure::Input(e.into()))?;
            print!("{}", render::divide_csv(&rows));
            Ok(())
        }
        Command::Serve {
            port,
            threshold,
            static_dir,
        } => {
            let port = match std::env::var("PORT") {
                Ok(value) => value
                    .trim()
                    .parse()
                    .with_context(|| format!("PORT must be a port number, got {value:?}"))
                    .map_err(Failure::Input)?,
                Err(_) => port,
            };
            if !(threshold >= 0.0 && threshold.is_finite()) {
                return Err(Failure::Input(anyhow::anyhow!(
                    "threshold must be nonnegative, got {threshold}"
                )));
            }
            serve(port, threshold, static_dir).map_err(Failure::Solver)
        }
    }
}

fn read_input<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, fbwm_core::FpcsError>) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Input)?;
    parse(&text).map_err(|e| Failure::from(PipelineError::Input(e)))
}

fn parse_tfn(text: &str) -> anyhow::Result<Tfn> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("expected three comma-separated numbers, got {text:?}"))?;
    let [a, b, c] = parts[..] else {
        anyhow::bail!("expected three comma-separated numbers, got {text:?}");
    };
    Ok(Tfn::new(a, b, c)?)
}

fn emit<T: Serialize>(format: Format, value: &T, table: impl FnOnce() -> String) -> Result<(), Failure> {
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Solver(e.into()))?;
            println!("{text}");
        }
        Format::Table => print!("{}", table()),
    }
    Ok(())
}

fn serve(port: u16, threshold: f64, static_dir: Option<PathBuf>) -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .init();
    let config = ServiceConfig {
        threshold,
        static_dir,
        ..ServiceConfig::default()
    };
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(fbwm_service::serve(SocketAddr::from(([0, 0, 0, 0], port)), config))?;
    Ok(())
}
