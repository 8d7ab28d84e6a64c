//! Chain-strength selection: the break-rate-driven bisection and the
//! exhaustive chain scan it is compared against.

use std::fmt::Write as _;

use serde::Serialize;

use crate::embedding::{avg_chain_break_rate, coupler_corruption_stats, embed_model, unembed, ChainStrength, EmbeddedModel, Embedding};
use crate::error::{invalid, Result};
use crate::ising::{cut_size, Graph, IsingModel};
use crate::rng::derive_seed;
use crate::sampler::Sampler;
use crate::samples::SampleSet;
use crate::topology::Topology;

/// Hardware break-rate windows, usable as starting points for `cb_interval`.
pub const CB_PRESET_NARROW: [f64; 2] = [6e-3, 2e-2];
pub const CB_PRESET_WIDE: [f64; 2] = [2e-2, 5e-2];
/// Window used with the default simulated-annealing sampler, whose break
/// rates sit higher than hardware ones at comparable cut quality.
pub const CB_ANNEAL_DEFAULT: [f64; 2] = [5e-2, 1e-1];

pub const DEFAULT_SHOTS_PER_STEP: usize = 128;
pub const DEFAULT_MAX_STEPS: usize = 30;
/// `width_tol` as a fraction of the initial interval width when unset.
pub const DEFAULT_WIDTH_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct TunerConfig {
    pub cb_interval: [f64; 2],
    pub cs_interval: Option<[f64; 2]>,
    pub shots_per_step: usize,
    pub width_tol: Option<f64>,
    pub max_steps: usize,
    pub seed: u64,
}

impl TunerConfig {
    pub fn new(cb_interval: [f64; 2]) -> Self {
        Self {
            cb_interval,
            cs_interval: None,
            shots_per_step: DEFAULT_SHOTS_PER_STEP,
            width_tol: None,
            max_steps: DEFAULT_MAX_STEPS,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.cb_interval;
        if !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(invalid(format!("break-rate window [{lo}, {hi}] must satisfy 0 <= lo < hi <= 1")));
        }
        if let Some([lo, hi]) = self.cs_interval {
            if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi) {
                return Err(invalid(format!("chain-strength interval [{lo}, {hi}] must satisfy 0 <= lo < hi")));
            }
        }
        if let Some(tol) = self.width_tol {
            if !(tol > 0.0) {
                return Err(invalid(format!("width tolerance {tol} must be positive")));
            }
        }
        if self.shots_per_step == 0 || self.max_steps == 0 {
            return Err(invalid("shots_per_step and max_steps must be at least 1"));
        }
        Ok(())
    }
}

/// One bisection step; `lo`/`hi` is the interval after the update.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub cs: f64,
    pub rate: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TunerTrace {
    pub records: Vec<StepRecord>,
    pub converged: bool,
    pub final_cs: f64,
    pub steps: usize,
}

impl TunerTrace {
    /// `step,cs,chain_break_rate,lo,hi,converged` rows; `converged` is set
    /// on the final row only.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,cs,chain_break_rate,lo,hi,converged\n");
        for r in &self.records {
            let done = self.converged && r.step == self.steps;
            let _ = writeln!(out, "{},{},{},{},{},{}", r.step, r.cs, r.rate, r.lo, r.hi, done);
        }
        out
    }
}

/// Bisection on `interval` driven by `probe(cs, step) -> break rate`.
///
/// A rate inside the window stops the search; a rate above it means the
/// chains are too weak and raises the lower end, anything else lowers the
/// upper end. Without convergence the search stops once the interval is
/// narrower than the tolerance or `max_steps` is reached, and returns the
/// smallest tried strength whose rate did not exceed the window, or the
/// final upper end if there is none.
pub fn binary_search(
    interval: [f64; 2],
    config: &TunerConfig,
    mut probe: impl FnMut(f64, usize) -> Result<f64>,
) -> Result<TunerTrace> {
    config.validate()?;
    let [mut lo, mut hi] = interval;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(invalid(format!("chain-strength interval [{lo}, {hi}] is empty")));
    }
    let tol = config.width_tol.unwrap_or(DEFAULT_WIDTH_FRACTION * (hi - lo));
    let [cb_lo, cb_hi] = config.cb_interval;
    let mut records = Vec::new();
    let mut best: Option<f64> = None;
    for step in 1..=config.max_steps {
        let cs = 0.5 * (lo + hi);
        let rate = probe(cs, step)?;
        if (cb_lo..=cb_hi).contains(&rate) {
            records.push(StepRecord { step, cs, rate, lo, hi });
            return Ok(TunerTrace { records, converged: true, final_cs: cs, steps: step });
        }
        if rate > cb_hi {
            lo = cs;
        } else {
            hi = cs;
            best = Some(best.map_or(cs, |b: f64| b.min(cs)));
        }
        records.push(StepRecord { step, cs, rate, lo, hi });
        if hi - lo < tol {
            break;
        }
    }
    let steps = records.len();
    Ok(TunerTrace { records, converged: false, final_cs: best.unwrap_or(hi), steps })
}

fn sample_embedded(em: &EmbeddedModel, sampler: &(impl Sampler + ?Sized), shots: usize, seed: u64) -> Result<SampleSet> {
    sampler.sample(em.physical(), shots, seed)?.relabel(em.qubits().to_vec())
}

/// Tunes a uniform chain strength: each step builds the embedded model at
/// the candidate strength, samples `shots_per_step` shots and measures the
/// mean break rate. `default_hi` is the upper end used when the config has
/// no interval, normally [`crate::bounds::choi_bound_global`] of the logical model.
pub fn binary_search_chain_strength(
    em_builder: impl Fn(f64) -> Result<EmbeddedModel>,
    sampler: &(impl Sampler + ?Sized),
    config: &TunerConfig,
    default_hi: f64,
) -> Result<TunerTrace> {
    let interval = config.cs_interval.unwrap_or([0.0, default_hi]);
    binary_search(interval, config, |cs, step| {
        let em = em_builder(cs)?;
        let ss = sample_embedded(&em, sampler, config.shots_per_step, derive_seed(config.seed, step as u64))?;
        avg_chain_break_rate(&ss, &em)
    })
}

/// Spreads the logical weights, inserts uniform chains of magnitude `cs`
/// and rescales into the given hardware ranges, in that order.
pub fn embedding_builder<'a>(
    model: &'a IsingModel,
    e: &'a Embedding,
    target: &'a Topology,
    h_range: [f64; 2],
    j_range: [f64; 2],
) -> impl Fn(f64) -> Result<EmbeddedModel> + 'a {
    move |cs| embed_model(model, e, target, &ChainStrength::Uniform(cs))?.autoscaled(h_range, j_range)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub cs: f64,
    pub best_cut: usize,
    pub mean_energy: f64,
    pub avg_break_rate: f64,
    pub distinct_corrupted: usize,
}

/// Samples every strength in `cs_list` (point `i` seeded with
/// `derive_seed(seed, i)`) and reports the best cut of `g` after
/// majority-vote unembedding.
pub fn chain_scan(
    em_builder: impl Fn(f64) -> Result<EmbeddedModel>,
    sampler: &(impl Sampler + ?Sized),
    cs_list: &[f64],
    shots: usize,
    g: &Graph,
    seed: u64,
) -> Result<Vec<ScanRecord>> {
    if cs_list.is_empty() {
        return Err(invalid("chain scan needs at least one strength"));
    }
    if let Some(cs) = cs_list.iter().find(|cs| !(**cs > 0.0 && cs.is_finite())) {
        return Err(invalid(format!("scan strength {cs} must be positive")));
    }
    cs_list
        .iter()
        .enumerate()
        .map(|(i, &cs)| {
            let em = em_builder(cs)?;
            let point_seed = derive_seed(seed, i as u64);
            let ss = sample_embedded(&em, sampler, shots, point_seed)?;
            let mut best_cut = 0;
            for a in unembed(&ss, em.embedding(), point_seed)? {
                best_cut = best_cut.max(cut_size(g, &a)?);
            }
            Ok(ScanRecord {
                cs,
                best_cut,
                mean_energy: ss.mean_energy(),
                avg_break_rate: avg_chain_break_rate(&ss, &em)?,
                distinct_corrupted: coupler_corruption_stats(&ss, &em)?.distinct,
            })
        })
        .collect()
}

/// `cs,best_cut,mean_energy,avg_break_rate,distinct_corrupted` rows.
pub fn scan_to_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from("cs,best_cut,mean_energy,avg_break_rate,distinct_corrupted\n");
    for r in records {
        let _ = writeln!(out, "{},{},{},{},{}", r.cs, r.best_cut, r.mean_energy, r.avg_break_rate, r.distinct_corrupted);
    }
    out
}

/// Smallest scanned strength whose best cut is within `rel_tol` of the
/// scan maximum. Records must be in ascending `cs`.
pub fn plateau_detect(records: &[ScanRecord], rel_tol: f64) -> Result<f64> {
    if records.len() < 3 {
        return Err(invalid(format!("plateau detection needs at least 3 records, got {}", records.len())));
    }
    if !(rel_tol >= 0.0) {
        return Err(invalid(format!("relative tolerance {rel_tol} must be non-negative")));
    }
    let max = records.iter().map(|r| r.best_cut).max().unwrap_or(0) as f64;
    let threshold = max * (1.0 - rel_tol);
    Ok(records.iter().find(|r| r.best_cut as f64 >= threshold).map_or(records[0].cs, |r| r.cs))
}
