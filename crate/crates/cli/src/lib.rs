//! Command-line front end for `triscord`: single-state reports, slice sweeps,
//! branch statistics and the analytic-vs-oracle gate.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use triscord::correlations::{conditional_entropy, report, Branch, CorrelationReport};
use triscord::xstate::{param_rng, XParams};

pub mod check;
pub mod sweep;

pub use check::{run_check, CheckOptions, CheckSummary};
pub use sweep::{format_sig, run_sweep, Quantity, Slice, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONSTRAINT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 73;

pub const DEFAULT_SEED: u64 = 2024;
pub const SEED_ENV: &str = "TRISCORD_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "triscord",
    version,
    about = "Tripartite discord, correlations and negativity of symmetric three-qubit X-states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print every correlation quantity for one parameter triple.
    #[command(allow_negative_numbers = true)]
    Report {
        a1: f64,
        c1: f64,
        c2: f64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate quantities over a 2D slice of parameter space and write CSV.
    Sweep {
        #[arg(long, value_enum)]
        slice: Slice,
        /// Grid points per axis.
        #[arg(long, default_value_t = 201)]
        n: usize,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = Quantity::ALL)]
        quantities: Vec<Quantity>,
    },
    /// Tally which closed-form branch attains the conditional entropy.
    Stats {
        #[arg(long, default_value_t = 6000)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Cross-validate the closed form against the measurement grid search.
    Check {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Grid points per angle axis.
        #[arg(long, default_value_t = 48)]
        grid: usize,
        /// Grid points per phase axis, when different from --grid.
        #[arg(long)]
        phi_grid: Option<usize>,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Debug, Args)]
pub struct SeedArg {
    #[arg(long = "seed", env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub value: u64,
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match cli.command {
        Command::Report { a1, c1, c2, json } => {
            cmd_report(XParams::new(a1, c1, c2), json, out, err)
        }
        Command::Sweep {
            slice,
            n,
            output,
            quantities,
        } => {
            let spec = SweepSpec {
                slice,
                n,
                output,
                quantities,
            };
            sweep::cmd_sweep(&spec, out, err)
        }
        Command::Stats { samples, seed } => cmd_stats(samples, seed.value, out, err),
        Command::Check {
            samples,
            grid,
            phi_grid,
            seed,
        } => {
            let opts = CheckOptions {
                samples,
                grid,
                phi_grid: phi_grid.unwrap_or(grid),
                seed: seed.value,
            };
            check::cmd_check(&opts, out, err)
        }
    }
}

fn cmd_report(params: XParams, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if let Err(violations) = params.validate() {
        let _ = writeln!(err, "error: invalid parameters: {violations}");
        return EXIT_CONSTRAINT;
    }
    let r = match report(&params) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_VALIDATION;
        }
    };
    let written = if json {
        writeln!(out, "{}", report_json(&r))
    } else {
        write_report_table(&r, out)
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_IO
        }
    }
}

/// JSON object with keys a1, c1, c2, s_rho, s_ab, s_cond, branch, d3, t3, j3, n3.
pub fn report_json(r: &CorrelationReport) -> serde_json::Value {
    serde_json::json!({
        "a1": r.params.a1,
        "c1": r.params.c1,
        "c2": r.params.c2,
        "s_rho": r.s_rho,
        "s_ab": r.s_ab,
        "s_cond": r.s_cond,
        "branch": r.branch.as_str(),
        "d3": r.d3,
        "t3": r.t3,
        "j3": r.j3,
        "n3": r.n3,
    })
}

fn write_report_table(r: &CorrelationReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "a1      {}", r.params.a1)?;
    writeln!(out, "c1      {}", r.params.c1)?;
    writeln!(out, "c2      {}", r.params.c2)?;
    for (name, v) in [("s_rho", r.s_rho), ("s_ab", r.s_ab), ("s_cond", r.s_cond)] {
        writeln!(out, "{name:<7} {v:.6}")?;
    }
    writeln!(out, "branch  {}", r.branch)?;
    for (name, v) in [("d3", r.d3), ("t3", r.t3), ("j3", r.j3), ("n3", r.n3)] {
        writeln!(out, "{name:<7} {v:.6}")?;
    }
    Ok(())
}

/// Winning-branch tally over `samples` seeded draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchStats {
    pub seed: u64,
    pub samples: usize,
    /// Counts for S1, S2, S3.
    pub counts: [usize; 3],
}

impl BranchStats {
    pub fn percent(&self, branch: Branch) -> f64 {
        100.0 * self.counts[branch as usize] as f64 / self.samples as f64
    }
}

pub fn branch_stats(samples: usize, seed: u64) -> triscord::Result<BranchStats> {
    let mut rng = param_rng(seed);
    let mut counts = [0; 3];
    for _ in 0..samples {
        let p = XParams::sample(&mut rng);
        counts[conditional_entropy(&p)?.branch as usize] += 1;
    }
    Ok(BranchStats {
        seed,
        samples,
        counts,
    })
}

fn cmd_stats(samples: usize, seed: u64, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if samples == 0 {
        let _ = writeln!(err, "error: --samples must be at least 1");
        return EXIT_USAGE;
    }
    let stats = match branch_stats(samples, seed) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_VALIDATION;
        }
    };
    let mut text = format!("seed    {}\nsamples {}\n", stats.seed, stats.samples);
    for b in Branch::ALL {
        text += &format!(
            "{b}      {:6.2}%  ({})\n",
            stats.percent(b),
            stats.counts[b as usize]
        );
    }
    match out.write_all(text.as_bytes()) {
        Ok(()) => EXIT_OK,
        Err(_) => EXIT_IO,
    }
}
