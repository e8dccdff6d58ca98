//! Command-line front end for `tailindex`: CSV ingestion, point estimates and
//! regions, k sweeps, the KS scan and the coverage simulation driver.

pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use error::{CliError, CliResult, EXIT_ESTIMATOR, EXIT_OK, EXIT_USAGE};

use commands::{Sinks, SimulateRequest};

#[derive(Debug, Parser)]
#[command(name = "tailindex", version, about = "Tail index regions for censored heavy-tailed data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Confidence level, e.g. 0.95.
    #[arg(long)]
    pub level: Option<f64>,
    /// Comma-separated methods (EL, BCL, B, ML, CL2, NORMAL); default all applicable.
    #[arg(long)]
    pub methods: Option<String>,
    /// Output file (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point estimates and regions at one k.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Regions for every k in a range.
    Sweep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k_min: usize,
        #[arg(long)]
        k_max: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Goodness-of-fit scan of the Pareto-type tail over k.
    Ks {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k_min: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
        /// Output file (default stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo coverage study driven by a config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated methods, overriding the config.
        #[arg(long)]
        methods: Option<String>,
        /// Optimal-k table destination (default next to --out, or appended to stdout).
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Output file (default stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const DEFAULT_LEVEL: f64 = 0.95;

fn open_out(path: Option<&PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| CliError::Io {
            path: p.clone(),
            source,
        })?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

/// Runs a parsed command and returns its exit status; errors are reported on `err`.
pub fn run(cli: &Cli, err: &mut dyn Write) -> i32 {
    match dispatch(cli, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, err: &mut dyn Write) -> CliResult<i32> {
    let out_path = match &cli.command {
        Command::Estimate { common, .. } | Command::Sweep { common, .. } => common.out.as_ref(),
        Command::Ks { out, .. } | Command::Simulate { out, .. } => out.as_ref(),
    };
    let mut out = open_out(out_path)?;
    let mut io = Sinks { out: &mut out, err };
    let code = match &cli.command {
        Command::Estimate { input, k, common } => commands::estimate(
            input,
            *k,
            common.level.unwrap_or(DEFAULT_LEVEL),
            common.methods.as_deref(),
            &mut io,
        )?,
        Command::Sweep {
            input,
            k_min,
            k_max,
            common,
        } => commands::sweep(
            input,
            *k_min,
            *k_max,
            common.level.unwrap_or(DEFAULT_LEVEL),
            common.methods.as_deref(),
            &mut io,
        )?,
        Command::Ks {
            input, k_min, k_max, ..
        } => commands::ks(input, *k_min, *k_max, &mut io)?,
        Command::Simulate {
            config,
            seed,
            methods,
            summary,
            out,
        } => {
            let derived = match (summary, out) {
                (Some(s), _) => Some(s.clone()),
                (None, Some(o)) => Some(commands::summary_path(o)),
                (None, None) => None,
            };
            let req = SimulateRequest {
                config,
                seed: *seed,
                methods: methods.as_deref(),
                summary: derived.as_deref(),
            };
            commands::simulate(&req, &mut io)?
        }
    };
    io.out.flush()?;
    Ok(code)
}
