//! Command-line front end.
//!
//! Subcommands print machine-parseable output on stdout (JSON, or CSV for
//! `bench`) and diagnostics on stderr. Exit codes: 0 success, 2 bad input
//! (flags, file syntax, structural validation), 3 numerical failure inside
//! the contraction, 4 oracle disagreement from `verify`, 5 singular input to
//! `factorize`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use serde_json::json;

use blockperm::engine::{compute_permanent, RunStats};
use blockperm::error::Error;
use blockperm::factor::reconstruct;
use blockperm::factorize::{decompose_dense_block, generate_random_factorization, rcm_permutation};
use blockperm::io;
use blockperm::oracle::permanent_ryser;
use blockperm::scalar::ScaledComplex;

const VERIFY_RELATIVE_TOLERANCE: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "blockperm",
    version,
    about = "Permanents of block-factorized complex matrices",
    propagate_version = true
)]
struct Cli {
    /// Progress diagnostics on stderr (-v summary, -vv per-layer detail)
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the permanent of a factorization file
    Compute {
        /// Factorization JSON file
        path: PathBuf,
        /// Relative singular-value truncation threshold (0 keeps everything)
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
    /// Cross-check the contraction against the Ryser oracle (N ≤ 24)
    Verify {
        /// Factorization JSON file
        path: PathBuf,
        /// Relative singular-value truncation threshold
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
    /// Write a seeded random factorization
    Generate {
        /// Matrix dimension
        #[arg(long)]
        n: usize,
        /// Number of factors
        #[arg(long)]
        l: usize,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probability of a 2×2 block at each tiling opportunity
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a small dense matrix (n ≤ 8, invertible) into adjacent 2×2 factors
    Factorize {
        /// Dense matrix JSON file
        path: PathBuf,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a bandwidth-reducing symmetric reordering as a JSON array
    Rcm {
        /// Dense matrix JSON file
        path: PathBuf,
        /// Magnitudes at or below this count as structural zeros
        #[arg(long, default_value_t = 0.0)]
        zero_threshold: f64,
    },
    /// CSV timing sweep: n doubles from 8 up to max-n at fixed l
    Bench {
        /// Largest dimension in the sweep
        #[arg(long, default_value_t = 64)]
        max_n: usize,
        /// Number of factors
        #[arg(long, default_value_t = 2)]
        l: usize,
        /// Rows per dimension (same instance, repeated timing)
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probability of a 2×2 block at each tiling opportunity
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Relative singular-value truncation threshold
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
}

/// Exit code for a computation error: numerical failures are distinct from
/// bad input, and singular matrices from `factorize` have their own code.
fn exit_for(err: &Error) -> u8 {
    match err {
        Error::ConvergenceFailure { .. } => 3,
        Error::Singular { .. } => 5,
        _ => 2,
    }
}

/// Verify verdict, separated from I/O so the disagreement path stays tested.
fn verify_exit(relative_error: f64) -> u8 {
    if relative_error <= VERIFY_RELATIVE_TOLERANCE {
        0
    } else {
        4
    }
}

fn permanent_json(value: &ScaledComplex) -> serde_json::Value {
    json!({
        "mantissa": [value.mantissa.re, value.mantissa.im],
        "exponent10": value.exponent10,
    })
}

fn report_stats(stats: &RunStats, verbose: u8) {
    if verbose >= 1 {
        eprintln!(
            "contraction: {:.3}s, max bond {}, {} SVDs, {} singular values discarded",
            stats.wall_time, stats.max_bond, stats.svd_count, stats.truncated_rank_total
        );
    }
    if verbose >= 2 {
        eprintln!("per-layer bonds: {:?}", stats.per_layer_bonds);
        eprintln!("per-layer degrees: {:?}", stats.per_layer_phys);
    }
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<(), (u8, String)> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| (2, format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), (u8, String)> {
    let verbose = cli.verbose;
    match cli.command {
        Command::Compute { path, tolerance } => {
            let f = io::read_factorization(&path).map_err(|e| (2, e))?;
            if verbose >= 1 {
                eprintln!("loaded factorization: dim {}, {} factors", f.dim, f.factors.len());
            }
            let (value, stats) =
                compute_permanent(&f, tolerance).map_err(|e| (exit_for(&e), e.to_string()))?;
            report_stats(&stats, verbose);
            let doc = json!({ "permanent": permanent_json(&value), "stats": stats });
            println!("{}", serde_json::to_string_pretty(&doc).expect("stats serialize"));
            Ok(())
        }
        Command::Verify { path, tolerance } => {
            let f = io::read_factorization(&path).map_err(|e| (2, e))?;
            let a = reconstruct(&f).map_err(|e| (2, e.to_string()))?;
            let want = permanent_ryser(&a).map_err(|e| (2, e.to_string()))?;
            let (value, stats) =
                compute_permanent(&f, tolerance).map_err(|e| (exit_for(&e), e.to_string()))?;
            report_stats(&stats, verbose);
            let got = value.value();
            let relative_error = (got - want).norm() / want.norm().max(1.0);
            let code = verify_exit(relative_error);
            let doc = json!({
                "engine": permanent_json(&value),
                "ryser": [want.re, want.im],
                "relative_error": relative_error,
                "agree": code == 0,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
            if code == 0 {
                Ok(())
            } else {
                Err((code, format!("engine and Ryser disagree: relative error {relative_error:.3e}")))
            }
        }
        Command::Generate { n, l, seed, density, out } => {
            if n < 1 || l < 1 {
                return Err((2, "generate needs --n ≥ 1 and --l ≥ 1".into()));
            }
            if !(0.0..=1.0).contains(&density) {
                return Err((2, format!("--density {density} outside [0, 1]")));
            }
            let f = generate_random_factorization(n, l, seed, density);
            write_or_print(out.as_ref(), &io::factorization_to_json(&f))
        }
        Command::Factorize { path, out } => {
            let m = io::read_dense(&path).map_err(|e| (2, e))?;
            let f = decompose_dense_block(&m).map_err(|e| (exit_for(&e), e.to_string()))?;
            if verbose >= 1 {
                eprintln!("decomposed {}×{} matrix into {} factors", f.dim, f.dim, f.factors.len());
            }
            write_or_print(out.as_ref(), &io::factorization_to_json(&f))
        }
        Command::Rcm { path, zero_threshold } => {
            let m = io::read_dense(&path).map_err(|e| (2, e))?;
            let p = rcm_permutation(&m, zero_threshold).map_err(|e| (2, e.to_string()))?;
            println!("{}", serde_json::to_string(&p).expect("permutation serializes"));
            Ok(())
        }
        Command::Bench { max_n, l, repeats, seed, density, tolerance } => {
            if max_n < 1 || l < 1 || repeats < 1 {
                return Err((2, "bench needs --max-n ≥ 1, --l ≥ 1, --repeats ≥ 1".into()));
            }
            if !(0.0..=1.0).contains(&density) {
                return Err((2, format!("--density {density} outside [0, 1]")));
            }
            println!("n,l,wall_time_s,max_bond,svd_count");
            let mut n = 8.min(max_n);
            loop {
                let f = generate_random_factorization(n, l, seed.wrapping_add(n as u64), density);
                for _ in 0..repeats {
                    let (_, stats) = compute_permanent(&f, tolerance)
                        .map_err(|e| (exit_for(&e), e.to_string()))?;
                    println!(
                        "{n},{l},{:.6},{},{}",
                        stats.wall_time, stats.max_bond, stats.svd_count
                    );
                }
                if n >= max_n {
                    break;
                }
                n = (n * 2).min(max_n);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
