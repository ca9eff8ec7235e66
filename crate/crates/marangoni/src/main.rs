//! Command-line driver: run a configured simulation, audit a finished
//! output directory, or report the admissibility thresholds.
//!
//! Exit status: 0 success, 1 configuration error, 2 invariant abort
//! (including a failed audit), 3 solver failure, 4 I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use marangoni::config::parse_config;
use marangoni::error::SimError;
use marangoni::run;

#[derive(Parser)]
#[command(
    name = "marangoni",
    about = "Two-phase flow with a thermo-induced Marangoni effect on a staggered grid"
)]
struct Cli {
    /// Run configuration file (`key = value` lines).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override the configured output directory.
    #[arg(long, value_name = "DIR")]
    output: Option<PathBuf>,

    /// Verify a finished output directory and exit (fails with the
    /// invariant-abort status if any check fails).
    #[arg(
        long,
        value_name = "DIR",
        conflicts_with_all = ["config", "output", "print_thresholds", "seed"]
    )]
    audit: Option<PathBuf>,

    /// Evaluate the admissibility thresholds for the configuration and
    /// exit without running.
    #[arg(long)]
    print_thresholds: bool,

    /// Override the configured seed (drives constant estimation).
    #[arg(long, value_name = "INT")]
    seed: Option<u64>,
}

fn dispatch(cli: Cli) -> Result<(), SimError> {
    if let Some(dir) = cli.audit {
        let report = run::audit(&dir)?;
        print!("{report}");
        if !report.passed() {
            return Err(SimError::Invariant(
                "audit found violated invariants".to_string(),
            ));
        }
        return Ok(());
    }

    let path = cli.config.ok_or_else(|| {
        SimError::Config("--config <PATH> is required unless --audit is given".to_string())
    })?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| SimError::Io(format!("{}: {e}", path.display())))?;
    let mut config = parse_config(&text)?;
    if let Some(dir) = cli.output {
        config.output_dir = dir;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }

    if cli.print_thresholds {
        let (thr, estimated) = run::resolve_thresholds(&config);
        let c = &thr.constants;
        println!("theta1 = {:.12e}", thr.theta1);
        println!("theta2 = {:.12e}", thr.theta2);
        println!("zeta = {:.12e}", thr.zeta);
        println!("omega = {:.12e}", thr.omega);
        println!("mu_lo = {:.12e}", thr.mu_lo);
        println!("mu_hi = {:.12e}", thr.mu_hi);
        println!("kap_lo = {:.12e}", thr.kap_lo);
        println!("kap_hi = {:.12e}", thr.kap_hi);
        println!("c1 = {:.12e}", c.c1);
        println!("c2 = {:.12e}", c.c2);
        println!("c3 = {:.12e}", c.c3);
        println!("c_p = {:.12e}", c.c_p);
        println!(
            "constants_source = {}",
            if estimated { "estimated" } else { "config" }
        );
        return Ok(());
    }

    let summary = run::run(&config)?;
    print!("{}", summary.to_text());
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
