//! `spincone` — run verification suites over the geometry catalog.
//!
//! Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage or
//! configuration error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spincone::verify::config::RunConfig;
use spincone::verify::{run_all, run_suite, SUITES};

#[derive(Parser)]
#[command(name = "spincone", version, about = "Verification suites for spin-geometric identities on charts, hypersurfaces and generalized cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List the registered suites.
    List,
    /// Run one suite or all of them.
    Verify {
        /// Suite name (see `spincone list`).
        #[arg(long, conflicts_with = "all")]
        suite: Option<String>,
        /// Run every registered suite.
        #[arg(long)]
        all: bool,
        /// Seed for all sampling.
        #[arg(long)]
        seed: Option<u64>,
        /// Report format.
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the report to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON configuration file; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Restrict suites to the named geometries (repeatable).
        #[arg(long = "geometry")]
        geometries: Vec<String>,
        /// Override the per-suite default sample counts.
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for suite in SUITES {
                println!("{:<26} {}", suite.name, suite.anchor);
            }
            ExitCode::SUCCESS
        }
        Command::Verify {
            suite,
            all,
            seed,
            format,
            out,
            config,
            geometries,
            samples,
        } => {
            if suite.is_none() && !all {
                eprintln!("error: pass --suite <name> or --all (see `spincone list`)");
                return ExitCode::from(2);
            }
            let mut run_config = match config {
                Some(path) => match RunConfig::from_file(&path) {
                    Ok(c) => c,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                },
                None => RunConfig::default(),
            };
            if let Some(seed) = seed {
                run_config.seed = seed;
            }
            if let Some(samples) = samples {
                run_config.sample_count = Some(samples);
            }
            if !geometries.is_empty() {
                run_config.geometries = Some(geometries);
            }
            if let Some(name) = &suite {
                run_config.suites = Some(vec![name.clone()]);
            }

            let result = match &suite {
                Some(name) => run_suite(name, &run_config),
                None => run_all(&run_config),
            };
            let report = match result {
                Ok(report) => report,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };

            let rendered = match format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(rendered.as_bytes()).is_err() {
                    return ExitCode::from(2);
                }
            }
            eprintln!(
                "{} checks in {:.2}s",
                report.checks.len(),
                report.wall_seconds
            );
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
