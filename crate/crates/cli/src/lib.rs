//! Command line front end: configuration, subcommands and file formats.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::RunContext;
pub use config::RunConfig;
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "omega-imc", version, about = "Abstraction, verification and refinement of stochastic systems")]
pub struct Cli {
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the configured thread count.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Interval matrix file to verify instead of abstracting the model.
    #[arg(long, global = true)]
    pub imc: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the abstraction of the initial partition.
    Abstract,
    /// Verify the initial partition once.
    Verify,
    /// Run the refinement loop.
    Refine,
    /// Sample trajectories of the continuous system.
    Simulate {
        /// Initial state, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x0: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        horizon: usize,
        #[arg(long, default_value_t = 1)]
        n_traj: usize,
    },
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::config("--config is required"))?;
    let mut config = RunConfig::load(path)?;
    if let Some(p) = &cli.imc {
        config.imc = Some(std::env::current_dir()?.join(p));
    }
    let threads = cli.threads.or(config.numerics.threads).unwrap_or(0);
    let seed = cli.seed.unwrap_or(config.numerics.seed);
    let ctx = RunContext {
        config,
        out_dir: cli.out_dir.clone(),
        seed,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Other(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::Abstract => commands::cmd_abstract(&ctx),
        Command::Verify => commands::cmd_verify(&ctx),
        Command::Refine => commands::cmd_refine(&ctx),
        Command::Simulate { x0, horizon, n_traj } => commands::cmd_simulate(&ctx, x0, *horizon, *n_traj),
    })
}
