//! Config-driven command-line driver.
//!
//! `adt run <config>` executes the task list of a TOML config and writes CSV and text
//! artifacts plus a checksum manifest; `adt validate <config>` only parses and checks it.

pub mod config;
pub mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub use config::{parse_config, parse_config_str, RunConfig, Task};
pub use run::{execute, RunSummary};

/// Exit status when a run completes but a cross-check misses its tolerance.
pub const EXIT_CHECK_FAILED: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {message}", .path.display())]
    Io { path: PathBuf, message: String },

    #[error("{}: invalid config syntax: {message}", .path.display())]
    Syntax { path: PathBuf, message: String },

    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("task `{task}`: {source}")]
    Task {
        task: &'static str,
        #[source]
        source: crate::Error,
    },
}

#[derive(Debug, Parser)]
#[command(name = "adt", version, about = "Operator-basis equations of motion for small spin lattices")]
pub struct Cli {
    /// Output directory; overrides the config's `out`.
    #[arg(long, global = true, env = "ADT_OUT_DIR")]
    pub out: Option<PathBuf>,

    /// Overrides the config's `seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Only log errors.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every task of a config.
    Run { config: PathBuf },
    /// Parse and validate a config without running it.
    Validate { config: PathBuf },
}

fn init_logging(quiet: bool) {
    let level = if quiet { "error" } else { "info" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
}

/// Entry point shared by the binary and tests.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    init_logging(cli.quiet);
    match cli.command {
        Command::Validate { config } => match parse_config(&config) {
            Ok(c) => {
                if !cli.quiet {
                    println!(
                        "{}: ok ({} task(s), model {}, {} sites)",
                        config.display(),
                        c.tasks.len(),
                        c.model.kind(),
                        c.n_sites
                    );
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        },
        Command::Run { config } => {
            let mut cfg = match parse_config(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            };
            if let Some(o) = cli.out {
                cfg.out = o;
            }
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            match execute(&cfg) {
                Ok(summary) => {
                    if !cli.quiet {
                        for f in &summary.files {
                            println!("wrote {}", cfg.out.join(f).display());
                        }
                    }
                    if summary.checks_passed {
                        ExitCode::SUCCESS
                    } else {
                        eprintln!("error: a cross-check failed its tolerance (see compare.txt)");
                        ExitCode::from(EXIT_CHECK_FAILED)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}

pub fn main() -> ExitCode {
    main_with(std::env::args_os())
}
