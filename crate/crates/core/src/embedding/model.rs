use std::collections::{BTreeMap, HashMap};

use rand::Rng as _;

use super::{validate, ChainStrength, Embedding};
use crate::error::{invalid, Result};
use crate::ising::{autoscale, Assignment, Graph, IsingModel};
use crate::rng::{derive_seed, seeded};
use crate::samples::SampleSet;
use crate::topology::Topology;

/// A chain coupler between physical positions `a < b`, owned by logical vertex `owner`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FerroEdge {
    pub a: usize,
    pub b: usize,
    pub owner: usize,
}

/// Physical Ising model produced by [`embed_model`].
///
/// The physical model is indexed by position in `qubits` (ascending qubit ids).
#[derive(Debug, Clone)]
pub struct EmbeddedModel {
    physical: IsingModel,
    qubits: Vec<usize>,
    chain_positions: Vec<Vec<usize>>,
    ferro: Vec<FerroEdge>,
    ferro_by_chain: Vec<Vec<usize>>,
    embedding: Embedding,
    strengths: Vec<f64>,
    scale: f64,
}

impl EmbeddedModel {
    pub fn physical(&self) -> &IsingModel {
        &self.physical
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn logical_n(&self) -> usize {
        self.chain_positions.len()
    }

    /// Positions (into [`Self::qubits`]) of the chain of `v`.
    pub fn chain_positions(&self, v: usize) -> &[usize] {
        &self.chain_positions[v]
    }

    pub fn ferro_edges(&self) -> &[FerroEdge] {
        &self.ferro
    }

    /// Indices into [`Self::ferro_edges`] owned by `v`.
    pub fn ferro_of(&self, v: usize) -> &[usize] {
        &self.ferro_by_chain[v]
    }

    /// Chain strength magnitudes before any rescaling.
    pub fn strengths(&self) -> &[f64] {
        &self.strengths
    }

    /// Divisor applied by [`Self::autoscaled`]; 1 when never rescaled.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Rescales the physical weights into hardware ranges.
    pub fn autoscaled(mut self, h_range: [f64; 2], j_range: [f64; 2]) -> Result<Self> {
        let (physical, factor) = autoscale(&self.physical, h_range, j_range)?;
        self.physical = physical;
        self.scale *= factor;
        Ok(self)
    }

    /// Lifts a logical assignment to the physical positions (unbroken chains).
    pub fn lift(&self, logical: &[i8]) -> Result<Vec<i8>> {
        if logical.len() != self.logical_n() {
            return Err(invalid(format!("{} logical spins for {} chains", logical.len(), self.logical_n())));
        }
        let mut out = vec![1; self.qubits.len()];
        for (chain, &x) in self.chain_positions.iter().zip(logical) {
            for &p in chain {
                out[p] = x;
            }
        }
        Ok(out)
    }
}

/// Builds the physical model: uniform spreading of `h_v` over `φ(v)` and of
/// `J_uv` over every coupler between `φ(u)` and `φ(v)`, plus `−|F_v|` on
/// every coupler inside `φ(v)`.
pub fn embed_model(
    model: &IsingModel,
    e: &Embedding,
    target: &Topology,
    strength: &ChainStrength,
) -> Result<EmbeddedModel> {
    let report = validate(e, model.graph(), target);
    if !report.is_valid() || e.len() != model.n() {
        return Err(invalid(format!("embedding is not valid for this model: {report:?}")));
    }
    strength.check(e.len())?;

    let mut qubits: Vec<usize> = e.chains().iter().flatten().copied().collect();
    qubits.sort_unstable();
    let pos: HashMap<usize, usize> = qubits.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let owner = e.owners();
    let neighbors = target.neighbors();

    let chain_positions: Vec<Vec<usize>> = e.chains().iter().map(|c| c.iter().map(|q| pos[q]).collect()).collect();

    let mut h = vec![0.0; qubits.len()];
    for (v, chain) in chain_positions.iter().enumerate() {
        let share = model.h()[v] / chain.len() as f64;
        for &p in chain {
            h[p] = share;
        }
    }

    let mut couplers: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for ((u, v), w) in model.couplings() {
        let between: Vec<(usize, usize)> = e
            .chain(u)
            .iter()
            .flat_map(|&a| neighbors[&a].iter().filter(|b| owner.get(b) == Some(&v)).map(move |&b| (a, b)))
            .collect();
        let share = w / between.len() as f64;
        for (a, b) in between {
            let (pa, pb) = (pos[&a], pos[&b]);
            couplers.insert((pa.min(pb), pa.max(pb)), share);
        }
    }

    let strengths: Vec<f64> = (0..e.len()).map(|v| strength.for_chain(v)).collect();
    let mut ferro = Vec::new();
    let mut ferro_by_chain = vec![Vec::new(); e.len()];
    for (v, chain) in e.chains().iter().enumerate() {
        for (i, &a) in chain.iter().enumerate() {
            for &b in &chain[i + 1..] {
                if target.has_coupler(a, b) {
                    let (pa, pb) = (pos[&a], pos[&b]);
                    let key = (pa.min(pb), pa.max(pb));
                    couplers.insert(key, -strengths[v]);
                    ferro_by_chain[v].push(ferro.len());
                    ferro.push(FerroEdge { a: key.0, b: key.1, owner: v });
                }
            }
        }
    }

    let graph = Graph::new(qubits.len(), couplers.keys().copied())?;
    let physical = IsingModel::from_parts(graph, h, couplers.into_values().collect())?;
    let embedding = e.clone().with_chain_strength(strength.clone())?;
    Ok(EmbeddedModel { physical, qubits, chain_positions, ferro, ferro_by_chain, embedding, strengths, scale: 1.0 })
}

/// Majority-vote unembedding of every distinct sample; exact ties are
/// settled by a fair coin seeded from `(seed, sample index)`.
pub fn unembed(ss: &SampleSet, e: &Embedding, seed: u64) -> Result<Vec<Assignment>> {
    let chains: Vec<Vec<usize>> = e.chains().iter().map(|c| ss.positions(c)).collect::<Result<_>>()?;
    ss.samples()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = seeded(derive_seed(seed, i as u64));
            let spins = chains
                .iter()
                .map(|chain| {
                    let sum: i64 = chain.iter().map(|&p| i64::from(s.spins[p])).sum();
                    match sum.signum() {
                        0 => {
                            if rng.random::<bool>() {
                                1
                            } else {
                                -1
                            }
                        }
                        x => x as i8,
                    }
                })
                .collect();
            Assignment::new(spins)
        })
        .collect()
}
