//! Command-line driver for the `btc` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod run;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{Command, RunConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "btc", version, about = "Boundary time crystals in p,q-interacting spin models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads for parallel sweeps.
    #[arg(long, env = "BTC_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Integrate one mean-field trajectory and classify fixed points.
    Meanfield(CommonArgs),
    /// Mean-field phase portrait from a grid of seeds.
    Portrait(CommonArgs),
    /// Exact density-matrix evolution for a list of N.
    Evolve(CommonArgs),
    /// Leading Liouvillian eigenvalues and gap scaling.
    Spectrum(CommonArgs),
    /// Exact steady state and its structure.
    Steadystate(CommonArgs),
    /// Finite-N damping collapse.
    Scaling(CommonArgs),
    /// F / BTC / F+BTC regions over (omega_x, delta_gamma).
    Phasediagram(CommonArgs),
    /// Product-ansatz total-spin identity against the tensor construction.
    #[command(name = "ansatz-check")]
    AnsatzCheck(CommonArgs),
}

impl Sub {
    fn split(&self) -> (Command, &CommonArgs) {
        match self {
            Sub::Meanfield(a) => (Command::Meanfield, a),
            Sub::Portrait(a) => (Command::Portrait, a),
            Sub::Evolve(a) => (Command::Evolve, a),
            Sub::Spectrum(a) => (Command::Spectrum, a),
            Sub::Steadystate(a) => (Command::Steadystate, a),
            Sub::Scaling(a) => (Command::Scaling, a),
            Sub::Phasediagram(a) => (Command::Phasediagram, a),
            Sub::AnsatzCheck(a) => (Command::AnsatzCheck, a),
        }
    }
}

fn execute(sub: &Sub) -> Result<Vec<PathBuf>, CliError> {
    let (command, args) = sub.split();
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        // only fails if a pool already exists, which keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let text = std::fs::read_to_string(&args.config).map_err(|e| CliError::io(&args.config, e))?;
    let cfg = RunConfig::parse(command, &text)?;
    run::run(&cfg, &args.out)
}

/// Parses `args`, runs, and returns the process exit code. Failures print
/// one line of error JSON on stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return err.exit_code();
        }
    };
    match execute(&cli.command) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
