//! Sampler output shared by the samplers, the metrics and the tuner.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ising::{energy_unchecked, IsingModel};
use crate::io::{parse_index, read_json, write_json};

/// Tolerance of the stored-vs-recomputed energy cross-check.
pub const ENERGY_CHECK_TOL: f64 = 1e-6;

/// One distinct spin configuration and how often it was drawn.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub spins: Vec<i8>,
    pub energy: f64,
    pub occurrences: u64,
}

/// Samples over the qubits listed in `labels` (ascending); `spins[i]` is the
/// value of qubit `labels[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    labels: Vec<usize>,
    samples: Vec<Sample>,
    shots: u64,
    seed: u64,
}

impl SampleSet {
    pub fn new(labels: Vec<usize>, samples: Vec<Sample>, shots: u64, seed: u64) -> Result<Self> {
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("sample labels must be strictly ascending"));
        }
        for s in &samples {
            if s.spins.len() != labels.len() {
                return Err(Error::DataIntegrity(format!(
                    "sample has {} spins for {} labels",
                    s.spins.len(),
                    labels.len()
                )));
            }
            if s.spins.iter().any(|&x| x != 1 && x != -1) {
                return Err(Error::DataIntegrity("spin values must be ±1".into()));
            }
        }
        let total: u64 = samples.iter().map(|s| s.occurrences).sum();
        if total != shots {
            return Err(Error::DataIntegrity(format!("occurrences sum to {total}, shots = {shots}")));
        }
        Ok(Self { labels, samples, shots, seed })
    }

    /// Aggregates per-shot draws (in shot order) into distinct samples,
    /// ordered by first appearance.
    pub fn from_shots(labels: Vec<usize>, shots: Vec<(Vec<i8>, f64)>, seed: u64) -> Result<Self> {
        let total = shots.len() as u64;
        let mut index: HashMap<Vec<i8>, usize> = HashMap::new();
        let mut samples: Vec<Sample> = Vec::new();
        for (spins, energy) in shots {
            match index.get(&spins) {
                Some(&i) => samples[i].occurrences += 1,
                None => {
                    index.insert(spins.clone(), samples.len());
                    samples.push(Sample { spins, energy, occurrences: 1 });
                }
            }
        }
        Self::new(labels, samples, total, seed)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Replaces the labels, e.g. model positions by physical qubit ids.
    pub fn relabel(self, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(invalid(format!("{} labels for {} spins", labels.len(), self.labels.len())));
        }
        Self::new(labels, self.samples, self.shots, self.seed)
    }

    /// Positions of `qubits` within `labels`.
    pub fn positions(&self, qubits: &[usize]) -> Result<Vec<usize>> {
        qubits
            .iter()
            .map(|q| {
                self.labels
                    .binary_search(q)
                    .map_err(|_| invalid(format!("sample set has no value for qubit {q}")))
            })
            .collect()
    }

    /// Occurrence-weighted mean energy.
    pub fn mean_energy(&self) -> f64 {
        let sum: f64 = self.samples.iter().map(|s| s.energy * s.occurrences as f64).sum();
        sum / self.shots as f64
    }

    pub fn min_energy(&self) -> Option<f64> {
        self.samples.iter().map(|s| s.energy).reduce(f64::min)
    }

    /// Recomputes every energy on `model` (vertex `i` ↔ label position `i`).
    pub fn check_energies(&self, model: &IsingModel) -> Result<()> {
        if model.n() != self.labels.len() {
            return Err(Error::DataIntegrity(format!(
                "model has {} vertices, samples cover {} qubits",
                model.n(),
                self.labels.len()
            )));
        }
        for (i, s) in self.samples.iter().enumerate() {
            let e = energy_unchecked(model, &s.spins);
            if (e - s.energy).abs() > ENERGY_CHECK_TOL {
                return Err(Error::DataIntegrity(format!(
                    "sample {i}: stored energy {} but model gives {e}",
                    s.energy
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SampleRecord {
    spins: BTreeMap<String, i8>,
    energy: f64,
    occurrences: u64,
}

/// `{"shots": int, "seed": int, "samples": [{"spins": {"q": ±1}, "energy": float, "occurrences": int}]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleSetFile {
    shots: u64,
    seed: u64,
    samples: Vec<SampleRecord>,
}

impl From<&SampleSet> for SampleSetFile {
    fn from(ss: &SampleSet) -> Self {
        let samples = ss
            .samples
            .iter()
            .map(|s| SampleRecord {
                spins: ss.labels.iter().map(|q| q.to_string()).zip(s.spins.iter().copied()).collect(),
                energy: s.energy,
                occurrences: s.occurrences,
            })
            .collect();
        Self { shots: ss.shots, seed: ss.seed, samples }
    }
}

impl TryFrom<SampleSetFile> for SampleSet {
    type Error = Error;

    fn try_from(f: SampleSetFile) -> Result<Self> {
        let mut labels: Vec<usize> = match f.samples.first() {
            Some(s) => s.spins.keys().map(|k| parse_index(k, "spins")).collect::<Result<_>>()?,
            None => Vec::new(),
        };
        labels.sort_unstable();
        let mut samples = Vec::with_capacity(f.samples.len());
        for (i, rec) in f.samples.into_iter().enumerate() {
            let mut by_qubit = BTreeMap::new();
            for (k, x) in rec.spins {
                by_qubit.insert(parse_index(&k, "spins")?, x);
            }
            if by_qubit.len() != labels.len() || !by_qubit.keys().eq(labels.iter()) {
                return Err(Error::DataIntegrity(format!("sample {i} covers a different qubit set")));
            }
            samples.push(Sample { spins: by_qubit.into_values().collect(), energy: rec.energy, occurrences: rec.occurrences });
        }
        SampleSet::new(labels, samples, f.shots, f.seed)
    }
}

pub fn read_sample_set(path: &Path) -> Result<SampleSet> {
    read_json::<SampleSetFile>(path)?.try_into()
}

pub fn write_sample_set(path: &Path, ss: &SampleSet) -> Result<()> {
    write_json(path, &SampleSetFile::from(ss))
}
