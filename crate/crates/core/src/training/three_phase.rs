//! Three-phase training: sparse-DFT angular sweep over one period, central
//! subarray alias resolution, then a polar-domain range sweep.

use super::{
    angular_support, argmax, shift_profile, AngularSupport, PhaseRecord, PowerProfile, Sounder, TrainingContext,
    TrainingOutcome,
};
use crate::codebooks::{Codebook, CodebookKind, Codeword};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Phase1 {
    /// Shifted profile.
    pub profile: PowerProfile,
    pub support: AngularSupport,
    /// Median support label `š` (may lie one period below the grid).
    pub center: i64,
    /// `U` candidate grid labels `š + uQ`, wrapped into the grid.
    pub candidates: Vec<usize>,
    pub candidate_angles: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Phase2 {
    pub powers: Vec<f64>,
    /// Position of the winning candidate, i.e. the alias order `u*`.
    pub alias: usize,
    pub winner: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Phase3 {
    pub powers: Vec<f64>,
    pub range: f64,
    pub codeword: Codeword,
}

fn expect_kind(cb: &Codebook, kind: CodebookKind) -> Result<()> {
    if cb.kind != kind {
        return Err(Error::Config(format!(
            "expected a {kind:?} codebook, got {:?}",
            cb.kind
        )));
    }
    Ok(())
}

/// Sweeps the `Q` sparse-DFT codewords and derives the `U` alias candidates.
pub fn phase1_sweep(sounder: &mut Sounder<'_>, cb: &Codebook, support_db: f64) -> Result<Phase1> {
    expect_kind(cb, CodebookKind::SparseDft)?;
    let powers = cb
        .entries
        .iter()
        .map(|w| sounder.measure(w))
        .collect::<Result<Vec<_>>>()?;
    let labels = cb.entries.iter().map(|w| w.grid_index as i64).collect();
    let profile = shift_profile(&PowerProfile::new(powers, labels)?)?;
    let support = angular_support(&profile, &cb.grid, support_db)?;
    let center = support.median();
    let q = cb.len() as i64;
    let interval = cb.params.interval as i64;
    let candidates: Vec<usize> = (0..interval).map(|u| cb.grid.wrap(center + u * q)).collect();
    let candidate_angles = candidates.iter().map(|&s| cb.grid.angle(s as i64)).collect();
    Ok(Phase1 {
        profile,
        support,
        center,
        candidates,
        candidate_angles,
    })
}

/// Probes each candidate with the central subarray and keeps the strongest.
pub fn phase2_resolve(sounder: &mut Sounder<'_>, sub_cb: &Codebook, candidates: &[usize]) -> Result<Phase2> {
    expect_kind(sub_cb, CodebookKind::Subarray)?;
    let powers = candidates
        .iter()
        .map(|&s| {
            let w = sub_cb
                .by_grid_index(s)
                .ok_or_else(|| Error::Domain(format!("grid label {s} outside the subarray codebook")))?;
            sounder.measure(w)
        })
        .collect::<Result<Vec<_>>>()?;
    let alias = argmax(&powers).ok_or_else(|| Error::Domain("no candidate angles".into()))?;
    Ok(Phase2 {
        winner: candidates[alias],
        alias,
        powers,
    })
}

/// Sweeps the `V` polar codewords at grid label `s`.
pub fn phase3_range(sounder: &mut Sounder<'_>, polar_cb: &Codebook, s: usize) -> Result<Phase3> {
    expect_kind(polar_cb, CodebookKind::Polar)?;
    let sub = polar_cb.sub_codebook(s);
    if sub.is_empty() {
        return Err(Error::Domain(format!("grid label {s} outside the polar codebook")));
    }
    let powers = sub.iter().map(|w| sounder.measure(w)).collect::<Result<Vec<_>>>()?;
    let best = argmax(&powers).expect("non-empty sweep");
    let codeword = sub[best].clone();
    Ok(Phase3 {
        range: codeword.steer_range.expect("polar codeword has a range"),
        codeword,
        powers,
    })
}

/// Runs all three phases with `K = ctx.params.middle_k`.
pub fn three_phase_train(ctx: &TrainingContext, sounder: &mut Sounder<'_>) -> Result<TrainingOutcome> {
    three_phase_train_k(ctx, sounder, ctx.params.middle_k)
}

/// Runs all three phases. With `k > 1` the range sweep covers the `k`
/// labels around the support median, each moved by the alias resolved in
/// phase 2, and the strongest polar codeword overall wins.
pub fn three_phase_train_k(ctx: &TrainingContext, sounder: &mut Sounder<'_>, k: usize) -> Result<TrainingOutcome> {
    if k == 0 {
        return Err(Error::Config(
            "three-phase training needs at least one candidate angle".into(),
        ));
    }
    let p = &ctx.params;
    let grid = ctx.sparse.grid;
    let q = ctx.q() as i64;
    let start = sounder.pilots_used();

    let p1 = phase1_sweep(sounder, &ctx.sparse, p.support_db)?;
    let p2 = phase2_resolve(sounder, &ctx.subarray, &p1.candidates)?;
    let alias_shift = p2.alias as i64 * q;

    let labels: Vec<usize> = p1
        .support
        .middle(k)
        .into_iter()
        .map(|s| grid.wrap(s + alias_shift))
        .collect();
    let mut best: Option<(f64, Phase3)> = None;
    let mut range_log = Vec::with_capacity(labels.len());
    for &s in &labels {
        let p3 = phase3_range(sounder, &ctx.polar, s)?;
        let peak = p3.powers.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        range_log.push(PhaseRecord {
            phase: "range_sweep".into(),
            candidates: (1..=p3.powers.len() as i64).collect(),
            powers: p3.powers.clone(),
            winner: p3.codeword.range_index.map(|v| v as i64),
        });
        if best.as_ref().is_none_or(|(b, _)| peak > *b) {
            best = Some((peak, p3));
        }
    }
    let (_, p3) = best.expect("k >= 1");

    let mut phase_log = vec![
        PhaseRecord {
            phase: "sparse_sweep".into(),
            candidates: p1.profile.codeword_indices.clone(),
            powers: p1.profile.powers.clone(),
            winner: Some(p1.center),
        },
        PhaseRecord {
            phase: "alias_resolution".into(),
            candidates: p1.candidates.iter().map(|&s| s as i64).collect(),
            powers: p2.powers.clone(),
            winner: Some(p2.winner as i64),
        },
    ];
    phase_log.extend(range_log);

    Ok(TrainingOutcome {
        est_angle: Some(p3.codeword.steer_angle),
        est_range: Some(p3.range),
        chosen: p3.codeword,
        pilots_used: sounder.pilots_used() - start,
        phase_log,
    })
}
