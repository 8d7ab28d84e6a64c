use std::collections::BTreeMap;

use serde::Serialize;

use super::{EmbeddedModel, Embedding};
use crate::error::{invalid, Result};
use crate::samples::SampleSet;

fn broken_edges<'a>(spins: &'a [i8], em: &'a EmbeddedModel, v: usize) -> impl Iterator<Item = usize> + 'a {
    let ferro = em.ferro_edges();
    em.ferro_of(v).iter().copied().filter(move |&i| spins[ferro[i].a] != spins[ferro[i].b])
}

fn broken_chains(spins: &[i8], em: &EmbeddedModel) -> usize {
    (0..em.logical_n()).filter(|&v| broken_edges(spins, em, v).next().is_some()).count()
}

/// Fraction of logical qubits with at least one antialigned chain coupler
/// in a single physical assignment.
pub fn chain_break_rate(spins: &[i8], em: &EmbeddedModel) -> Result<f64> {
    if spins.len() != em.qubits().len() {
        return Err(invalid(format!("{} spins for {} physical qubits", spins.len(), em.qubits().len())));
    }
    if em.logical_n() == 0 {
        return Ok(0.0);
    }
    Ok(broken_chains(spins, em) as f64 / em.logical_n() as f64)
}

/// Reorders sample spins into the embedded model's physical positions.
fn aligned(ss: &SampleSet, em: &EmbeddedModel) -> Result<Vec<(Vec<i8>, u64)>> {
    if ss.shots() == 0 {
        return Err(invalid("sample set is empty"));
    }
    if ss.labels() == em.qubits() {
        return Ok(ss.samples().iter().map(|s| (s.spins.clone(), s.occurrences)).collect());
    }
    let pos = ss.positions(em.qubits())?;
    Ok(ss
        .samples()
        .iter()
        .map(|s| (pos.iter().map(|&p| s.spins[p]).collect(), s.occurrences))
        .collect())
}

/// Occurrence-weighted mean of the per-shot break rate.
pub fn avg_chain_break_rate(ss: &SampleSet, em: &EmbeddedModel) -> Result<f64> {
    let rows = aligned(ss, em)?;
    if em.logical_n() == 0 {
        return Ok(0.0);
    }
    // integer numerator keeps the reduction exact and order independent
    let broken: u64 = rows.iter().map(|(spins, occ)| broken_chains(spins, em) as u64 * occ).sum();
    Ok(broken as f64 / (em.logical_n() as f64 * ss.shots() as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorruptionStats {
    /// Shots in which each ferro edge (same order as `ferro_edges()`) was antialigned.
    pub per_edge: Vec<u64>,
    pub mean: f64,
    pub median: f64,
    /// Ferro edges corrupted at least once.
    pub distinct: usize,
    /// Number of corrupted edges inside one broken chain → (shot, chain) count.
    pub simultaneous: BTreeMap<usize, u64>,
}

pub fn coupler_corruption_stats(ss: &SampleSet, em: &EmbeddedModel) -> Result<CorruptionStats> {
    let rows = aligned(ss, em)?;
    let mut per_edge = vec![0u64; em.ferro_edges().len()];
    let mut simultaneous = BTreeMap::new();
    for (spins, occ) in &rows {
        for v in 0..em.logical_n() {
            let mut k = 0;
            for i in broken_edges(spins, em, v) {
                per_edge[i] += occ;
                k += 1;
            }
            if k > 0 {
                *simultaneous.entry(k).or_insert(0) += occ;
            }
        }
    }
    let (mean, median) = if per_edge.is_empty() {
        (0.0, 0.0)
    } else {
        let mut sorted = per_edge.clone();
        sorted.sort_unstable();
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid] as f64
        } else {
            (sorted[mid - 1] + sorted[mid]) as f64 / 2.0
        };
        (per_edge.iter().sum::<u64>() as f64 / per_edge.len() as f64, median)
    };
    let distinct = per_edge.iter().filter(|&&c| c > 0).count();
    Ok(CorruptionStats { per_edge, mean, median, distinct, simultaneous })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainLengthHistogram {
    pub counts: BTreeMap<usize, usize>,
    pub total_qubits: usize,
}

pub fn chain_length_histogram(e: &Embedding) -> ChainLengthHistogram {
    let mut counts = BTreeMap::new();
    for c in e.chains() {
        *counts.entry(c.len()).or_insert(0) += 1;
    }
    ChainLengthHistogram { counts, total_qubits: e.qubit_count() }
}

/// Mean of `cmr[i] / cme[i]`.
pub fn embedding_ratio(cmr_counts: &[usize], cme_counts: &[usize]) -> Result<f64> {
    if cmr_counts.len() != cme_counts.len() || cmr_counts.is_empty() {
        return Err(invalid(format!(
            "qubit count lists must have equal non-zero length ({} vs {})",
            cmr_counts.len(),
            cme_counts.len()
        )));
    }
    if cme_counts.contains(&0) {
        return Err(invalid("zero qubit count in denominator"));
    }
    let sum: f64 = cmr_counts.iter().zip(cme_counts).map(|(&a, &b)| a as f64 / b as f64).sum();
    Ok(sum / cmr_counts.len() as f64)
}
