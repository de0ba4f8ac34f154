//! `plap`: runs one analysis described by a TOML config document.
//!
//! Exit status: 0 on success, 1 for configuration or i/o errors, 2 when the
//! hypotheses of the requested result are not met, 3 when a numerical
//! procedure does not converge.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod run;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::RunConfig;
use run::{Context, Failure};

#[derive(Debug, Parser)]
#[command(
    name = "plap",
    version,
    about = "Bounded p-Laplacian profiles, ball and strip solvers"
)]
struct Args {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random initial data; overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Progress messages on stderr.
    #[arg(long)]
    verbose: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("plap: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn execute(args: &Args) -> Result<Vec<PathBuf>, Failure> {
    let cfg = RunConfig::load(&args.config)?;
    let out = args
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .ok_or_else(|| {
            Failure::Config("no output directory: pass --out or set output_dir".into())
        })?;
    let ctx = Context {
        out,
        seed: args.seed.or(cfg.seed).unwrap_or(0),
        verbose: args.verbose,
    };
    run::run(&cfg, &ctx)
}
