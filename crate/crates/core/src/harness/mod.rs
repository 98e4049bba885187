//! Monte Carlo experiments: scenario files, the parallel trial runner and
//! CSV/JSON reports.
//!
//! Every trial draws its channel from a seed derived from the master seed,
//! the sweep value and the trial index, so all schemes see the same channel
//! realisations. Receiver noise gets a separate per-scheme seed.

mod report;
mod runner;
mod scenario;

pub use report::{emit, from_json, render, to_csv, to_json, ExperimentReport, OutputFormat, ReportRow, CSV_HEADER};
pub use runner::{
    channel_seed, derive_seed, draw_user, noise_seed, run, run_with, train_once, RunOptions, RunOutput, TrialRecord,
};
pub use scenario::{
    load_scenario, RunSection, Scenario, Scheme, SweepSection, SweepVariable, SystemSection, Timing, TrainingSection,
    UserPlacement,
};
