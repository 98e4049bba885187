use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{ExperimentReport, ReportRow};
use super::scenario::{Scenario, Scheme, SweepVariable};
use crate::channel::{achievable_rate, make_channel, tx_power_for_snr, Channel, SystemConfig, UserLocation};
use crate::error::{Error, Result};
use crate::training::{
    exhaustive_train, far_field_train, ls_estimate, perfect_csi, three_phase_train_k, two_phase_train, LsEstimator,
    Sounder, TrainingContext, TrainingOutcome,
};

const CHANNEL_STREAM: u64 = 0x6368_616e_6e65_6c00;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable across platforms and releases, unlike `DefaultHasher`.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x5eed_u64, |h, &p| splitmix64(h ^ splitmix64(p)))
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Seed of the channel drawn for one trial; shared by every scheme.
pub fn channel_seed(master: u64, sweep_value: f64, trial: usize) -> u64 {
    derive_seed(&[master, CHANNEL_STREAM, sweep_value.to_bits(), trial as u64])
}

/// Seed of the receiver noise for one scheme in one trial.
pub fn noise_seed(master: u64, scheme: &str, sweep_value: f64, trial: usize) -> u64 {
    derive_seed(&[master, fnv1a(scheme), sweep_value.to_bits(), trial as u64])
}

/// Result of one scheme on one channel realisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub scheme: String,
    pub sweep_value: f64,
    pub trial: usize,
    pub rate: f64,
    pub effective_rate: f64,
    pub pilots: usize,
    /// Whether the chosen polar codeword equals the noiseless exhaustive
    /// choice; `None` for schemes that do not pick a polar codeword.
    pub matches_oracle: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Keep the per-trial records in the output.
    pub keep_trials: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: ExperimentReport,
    pub trials: Vec<TrialRecord>,
}

/// Runs every scheme over every sweep value and aggregates the trials.
pub fn run(scenario: &Scenario) -> Result<ExperimentReport> {
    run_with(scenario, &RunOptions::default()).map(|o| o.report)
}

pub fn run_with(scenario: &Scenario, opts: &RunOptions) -> Result<RunOutput> {
    scenario.validate()?;
    match opts.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::Config(format!("cannot start {t} worker threads: {e}")))?;
            pool.install(|| run_inner(scenario, opts.keep_trials))
        }
        None => run_inner(scenario, opts.keep_trials),
    }
}

fn run_inner(scenario: &Scenario, keep_trials: bool) -> Result<RunOutput> {
    let mut rows = Vec::new();
    let mut kept = Vec::new();
    for value in scenario.sweep_points() {
        let ctx = scenario.context_at(value)?;
        let ls = if scenario.schemes.contains(&Scheme::LeastSquares) {
            Some(LsEstimator::new(&ctx.config)?)
        } else {
            None
        };
        let per_trial: Vec<Vec<TrialRecord>> = (0..scenario.run.n_trials)
            .into_par_iter()
            .map(|t| run_trial(scenario, &ctx, ls.as_ref(), value, t))
            .collect::<Result<_>>()?;
        for (i, scheme) in scenario.schemes.iter().enumerate() {
            let records: Vec<&TrialRecord> = per_trial.iter().map(|r| &r[i]).collect();
            rows.push(aggregate(scheme, scenario.sweep.variable, value, &records));
        }
        if keep_trials {
            kept.extend(per_trial.into_iter().flatten());
        }
    }
    Ok(RunOutput {
        report: ExperimentReport {
            scenario: scenario.clone(),
            rows,
        },
        trials: kept,
    })
}

/// Draws the user location of one trial.
pub fn draw_user<R: Rng + ?Sized>(
    scenario: &Scenario,
    ctx: &TrainingContext,
    value: f64,
    rng: &mut R,
) -> Result<UserLocation> {
    let u = &scenario.user;
    let uniform = |rng: &mut R, [lo, hi]: [f64; 2]| if hi > lo { rng.random_range(lo..hi) } else { lo };
    let range = uniform(rng, u.range_m);
    let mut angle = uniform(rng, u.angle);
    if u.on_grid {
        let grid = ctx.dft.grid;
        angle = grid.angle(grid.nearest(angle) as i64);
    }
    let range = if scenario.sweep.variable == SweepVariable::Range {
        value
    } else {
        range
    };
    UserLocation::new(range, angle)
}

fn run_trial(
    scenario: &Scenario,
    ctx: &TrainingContext,
    ls: Option<&LsEstimator>,
    value: f64,
    trial: usize,
) -> Result<Vec<TrialRecord>> {
    let master = scenario.run.master_seed;
    let wrap = |scheme: &str, e: Error| Error::Trial {
        scheme: scheme.to_string(),
        sweep_value: value,
        trial,
        source: Box::new(e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(channel_seed(master, value, trial));
    let loc = draw_user(scenario, ctx, value, &mut rng).map_err(|e| wrap("channel", e))?;
    let mut config: SystemConfig = ctx.config.clone();
    if scenario.sweep.variable == SweepVariable::Snr {
        config.tx_power = tx_power_for_snr(&config, loc.range_m, value);
        if !config.tx_power.is_finite() {
            let msg = format!(
                "reference SNR {value} dB needs a non-finite transmit power at {} m",
                loc.range_m
            );
            return Err(wrap("channel", Error::Config(msg)));
        }
    }
    let channel = make_channel(&config, &loc, &mut rng).map_err(|e| wrap("channel", e))?;

    let needs_oracle = scenario.schemes.iter().any(|s| {
        matches!(
            s,
            Scheme::ThreePhase { .. } | Scheme::TwoPhase { .. } | Scheme::Exhaustive
        )
    });
    let oracle = if needs_oracle {
        let mut sounder = Sounder::noiseless(&config, &channel);
        Some(
            exhaustive_train(ctx, &mut sounder)
                .map_err(|e| wrap("oracle", e))?
                .chosen
                .index,
        )
    } else {
        None
    };

    scenario
        .schemes
        .iter()
        .map(|scheme| {
            let id = scheme.id();
            let outcome = train_once(
                scheme,
                ctx,
                ls,
                &config,
                &channel,
                scenario.run.noiseless,
                noise_seed(master, &id, value, trial),
            )
            .map_err(|e| wrap(&id, e))?;
            let rate = achievable_rate(&channel, &outcome.chosen, &config).map_err(|e| wrap(&id, e))?;
            let matches_oracle = match (oracle, outcome.chosen.range_index) {
                (Some(o), Some(_)) => Some(outcome.chosen.index == o),
                _ => None,
            };
            Ok(TrialRecord {
                scheme: id,
                sweep_value: value,
                trial,
                rate,
                effective_rate: scenario.timing.efficiency(outcome.pilots_used) * rate,
                pilots: outcome.pilots_used,
                matches_oracle,
            })
        })
        .collect()
}

/// Runs one scheme on one channel with its own noise stream.
pub fn train_once(
    scheme: &Scheme,
    ctx: &TrainingContext,
    ls: Option<&LsEstimator>,
    config: &SystemConfig,
    channel: &Channel,
    noiseless: bool,
    seed: u64,
) -> Result<TrainingOutcome> {
    let mut noise = ChaCha8Rng::seed_from_u64(seed);
    let mut sounder = if noiseless {
        Sounder::noiseless(config, channel)
    } else {
        Sounder::noisy(config, channel, &mut noise)
    };
    match *scheme {
        Scheme::ThreePhase { k } => three_phase_train_k(ctx, &mut sounder, k),
        Scheme::Exhaustive => exhaustive_train(ctx, &mut sounder),
        Scheme::TwoPhase { k } => two_phase_train(ctx, &mut sounder, k),
        Scheme::FarField => far_field_train(ctx, &mut sounder),
        Scheme::LeastSquares => match ls {
            Some(est) => ls_estimate(est, &mut sounder),
            None => ls_estimate(&LsEstimator::new(config)?, &mut sounder),
        },
        Scheme::PerfectCsi => perfect_csi(channel),
    }
}

/// Means and the 95% half-width of the rate, summed in trial order so the
/// result does not depend on scheduling.
fn aggregate(scheme: &Scheme, variable: SweepVariable, value: f64, records: &[&TrialRecord]) -> ReportRow {
    let n = records.len() as f64;
    let mean = |f: &dyn Fn(&TrialRecord) -> f64| records.iter().map(|r| f(r)).sum::<f64>() / n;
    let mean_rate = mean(&|r| r.rate);
    let ci95 = if records.len() > 1 {
        let var = records.iter().map(|r| (r.rate - mean_rate).powi(2)).sum::<f64>() / (n - 1.0);
        1.96 * (var / n).sqrt()
    } else {
        0.0
    };
    let judged: Vec<bool> = records.iter().filter_map(|r| r.matches_oracle).collect();
    let accuracy = (!judged.is_empty()).then(|| judged.iter().filter(|m| **m).count() as f64 / judged.len() as f64);
    ReportRow {
        scheme: scheme.id(),
        sweep_variable: variable,
        sweep_value: value,
        mean_rate_bpshz: mean_rate,
        mean_eff_rate_bpshz: mean(&|r| r.effective_rate),
        mean_pilots: mean(&|r| r.pilots as f64),
        accuracy_vs_oracle: accuracy,
        ci95,
        n_trials: records.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_stable_and_distinct() {
        // Frozen so that reports stay comparable across releases.
        assert_eq!(derive_seed(&[]), 0x5eed);
        let a = channel_seed(7, 20.0, 3);
        assert_eq!(a, channel_seed(7, 20.0, 3));
        assert_ne!(a, channel_seed(7, 20.0, 4));
        assert_ne!(a, channel_seed(8, 20.0, 3));
        assert_ne!(
            noise_seed(7, "three_phase", 20.0, 3),
            noise_seed(7, "exhaustive", 20.0, 3)
        );
    }

    #[test]
    fn fnv_reference_value() {
        assert_eq!(fnv1a(""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a("a"), 0xaf63_dc4c_8601_ec8c);
    }
}
