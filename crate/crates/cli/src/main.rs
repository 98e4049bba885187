use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use sparsebeam::codebooks::active_count;
use sparsebeam::harness::{self, RunOptions};
use sparsebeam::numerics::{beta_params, closed_form_pattern};
use sparsebeam::training::beam_pattern;
use sparsebeam::training::overhead::{self, OverheadTable};
use sparsebeam::{OutputFormat, SystemConfig, UserLocation};

#[derive(Parser)]
#[command(
    name = "sparsebeam",
    version,
    about = "Near-field beam training with sparse DFT codebooks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo scenario and emit the aggregated report.
    Run {
        /// Scenario file (TOML).
        scenario: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Override the scenario's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the scenario's trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the overhead-optimal activation interval and its pilot count.
    OptimalU {
        #[arg(long)]
        antennas: usize,
        #[arg(long)]
        ranges: usize,
    },
    /// Emit the sparse-array beam pattern for one user as CSV.
    Pattern {
        /// User range in metres.
        #[arg(long)]
        range: f64,
        /// User spatial angle in (-1, 1).
        #[arg(long, allow_hyphen_values = true)]
        angle: f64,
        #[arg(long)]
        interval: usize,
        /// Add the closed-form approximation, evaluated on the principal period.
        #[arg(long)]
        closed_form: bool,
        #[arg(long, default_value_t = 257)]
        antennas: usize,
        #[arg(long, default_value_t = 30e9)]
        carrier_freq: f64,
        /// Number of beam angles sampled on [-1, 1).
        #[arg(long, default_value_t = 2001)]
        points: usize,
    },
    /// Print the pilot counts of every scheme.
    Overhead {
        #[arg(long)]
        antennas: usize,
        #[arg(long)]
        interval: usize,
        #[arg(long)]
        ranges: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Run {
            scenario,
            out: path,
            format,
            seed,
            trials,
            threads,
        } => {
            let mut sc = harness::load_scenario(&scenario)?;
            if let Some(s) = seed {
                sc.run.master_seed = s;
            }
            if let Some(t) = trials {
                sc.run.n_trials = t;
            }
            let opts = RunOptions {
                threads,
                keep_trials: false,
            };
            let report = harness::run_with(&sc, &opts)?.report;
            match path {
                Some(p) => harness::emit(&report, format.into(), &p)?,
                None => out.write_all(harness::render(&report, format.into())?.as_bytes())?,
            }
        }
        Command::OptimalU { antennas, ranges } => {
            let u = overhead::optimal_interval(antennas, ranges)?;
            let t = overhead::three_phase(antennas, u, ranges, 1)?;
            writeln!(out, "optimal_interval {u}")?;
            writeln!(out, "three_phase_pilots {t}")?;
        }
        Command::Pattern {
            range,
            angle,
            interval,
            closed_form,
            antennas,
            carrier_freq,
            points,
        } => {
            let config = SystemConfig::new(antennas, carrier_freq);
            config.validate()?;
            let loc = UserLocation::new(range, angle)?;
            let q = active_count(antennas, interval)?;
            let period = 2.0 / interval as f64;
            let mut text = String::from(if closed_form {
                "theta,exact,closed_form\n"
            } else {
                "theta,exact\n"
            });
            for i in 0..points.max(1) {
                let theta = -1.0 + 2.0 * i as f64 / points.max(1) as f64;
                let exact = beam_pattern(&config, &loc, theta, interval)?;
                if closed_form {
                    let delta = (theta - angle + 0.5 * period).rem_euclid(period) - 0.5 * period;
                    let p = beta_params(range, angle, delta, q, interval, config.antenna_spacing)?;
                    text.push_str(&format!("{theta},{exact},{}\n", closed_form_pattern(p)?));
                } else {
                    text.push_str(&format!("{theta},{exact}\n"));
                }
            }
            out.write_all(text.as_bytes())?;
        }
        Command::Overhead {
            antennas,
            interval,
            ranges,
            k,
        } => {
            let t = OverheadTable::new(antennas, interval, ranges, k)?;
            writeln!(out, "three_phase {}", t.three_phase)?;
            writeln!(out, "exhaustive {}", t.exhaustive)?;
            writeln!(out, "two_phase {}", t.two_phase)?;
            writeln!(out, "far_field {}", t.far_field)?;
            writeln!(out, "least_squares {}", t.least_squares)?;
        }
    }
    out.flush().context("flushing output")?;
    Ok(())
}
