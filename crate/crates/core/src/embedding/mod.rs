//! Minor embeddings: representation, validity checking, weight spreading,
//! majority-vote unembedding and chain-break metrics.

mod greedy;
mod metrics;
mod model;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{invalid, Error, Result};
use crate::ising::Graph;
use crate::io::{as_f64, index_map, parse_index, read_json, write_json};
use crate::topology::Topology;

pub use greedy::{greedy_embed, GreedyOptions};
pub use metrics::{
    avg_chain_break_rate, chain_break_rate, chain_length_histogram, coupler_corruption_stats, embedding_ratio,
    ChainLengthHistogram, CorruptionStats,
};
pub use model::{embed_model, unembed, EmbeddedModel, FerroEdge};

/// Chain strength magnitudes `|F|`, applied as negative couplers.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainStrength {
    Uniform(f64),
    PerChain(Vec<f64>),
}

impl ChainStrength {
    pub fn for_chain(&self, v: usize) -> f64 {
        match self {
            Self::Uniform(f) => f.abs(),
            Self::PerChain(fs) => fs[v].abs(),
        }
    }

    fn check(&self, chains: usize) -> Result<()> {
        let ok = |f: &f64| f.is_finite() && *f >= 0.0;
        match self {
            Self::Uniform(f) if ok(f) => Ok(()),
            Self::PerChain(fs) if fs.len() == chains && fs.iter().all(ok) => Ok(()),
            Self::Uniform(f) => Err(invalid(format!("chain strength {f} must be a finite magnitude"))),
            Self::PerChain(fs) => Err(invalid(format!(
                "per-chain strengths: {} finite magnitudes required, got {:?}",
                chains, fs
            ))),
        }
    }
}

/// Map from logical vertex `v` to its chain `φ(v)` of physical qubit ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    chains: Vec<Vec<usize>>,
    chain_strength: Option<ChainStrength>,
}

impl Embedding {
    /// Non-empty, pairwise disjoint chains.
    pub fn new(chains: Vec<Vec<usize>>) -> Result<Self> {
        let e = Self::new_unchecked(chains);
        if let Some(v) = e.chains.iter().position(Vec::is_empty) {
            return Err(invalid(format!("chain of vertex {v} is empty")));
        }
        if let Some((q, a, b)) = e.overlaps().first() {
            return Err(invalid(format!("qubit {q} is shared by chains {a} and {b}")));
        }
        Ok(e)
    }

    /// Accepts any chains, e.g. to report their defects with [`validate`].
    pub fn new_unchecked(chains: Vec<Vec<usize>>) -> Self {
        let chains = chains
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        Self { chains, chain_strength: None }
    }

    /// One qubit per vertex: `v ↦ {v}`.
    pub fn identity(n: usize) -> Self {
        Self::new_unchecked((0..n).map(|v| vec![v]).collect())
    }

    pub fn with_chain_strength(mut self, strength: ChainStrength) -> Result<Self> {
        strength.check(self.chains.len())?;
        self.chain_strength = Some(strength);
        Ok(self)
    }

    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    pub fn chain(&self, v: usize) -> &[usize] {
        &self.chains[v]
    }

    pub fn chain_strength(&self) -> Option<&ChainStrength> {
        self.chain_strength.as_ref()
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Total number of physical qubits used.
    pub fn qubit_count(&self) -> usize {
        self.chains.iter().map(Vec::len).sum()
    }

    /// Physical qubit to owning logical vertex (first owner on overlap).
    pub fn owners(&self) -> HashMap<usize, usize> {
        let mut owner = HashMap::new();
        for (v, chain) in self.chains.iter().enumerate() {
            for &q in chain {
                owner.entry(q).or_insert(v);
            }
        }
        owner
    }

    fn overlaps(&self) -> Vec<(usize, usize, usize)> {
        let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out = Vec::new();
        for (v, chain) in self.chains.iter().enumerate() {
            for &q in chain {
                if let Some(&u) = owner.get(&q) {
                    out.push((q, u, v));
                } else {
                    owner.insert(q, v);
                }
            }
        }
        out
    }
}

/// Outcome of [`validate`]; never an error.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidityReport {
    /// Every chain is non-empty, made of target qubits, and connected.
    pub connected: bool,
    /// No qubit belongs to two chains.
    pub disjoint: bool,
    /// Every source edge has at least one coupler between its chains.
    pub edges_covered: bool,
    pub disconnected_chains: Vec<usize>,
    /// `(qubit, first owner, second owner)`
    pub shared_qubits: Vec<(usize, usize, usize)>,
    pub uncovered_edges: Vec<(usize, usize)>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.connected && self.disjoint && self.edges_covered
    }
}

pub(crate) fn chain_is_connected(chain: &[usize], target: &Topology) -> bool {
    let Some(&start) = chain.first() else {
        return false;
    };
    if chain.iter().any(|q| !target.has_qubit(*q)) {
        return false;
    }
    let members: BTreeSet<usize> = chain.iter().copied().collect();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        for &p in &members {
            if !seen.contains(&p) && target.has_coupler(q, p) {
                seen.insert(p);
                queue.push_back(p);
            }
        }
    }
    seen.len() == members.len()
}

/// Checks the three minor-embedding conditions of `e` for `source` in `target`.
pub fn validate(e: &Embedding, source: &Graph, target: &Topology) -> ValidityReport {
    let n = source.n().max(e.len());
    let empty = Vec::new();
    let chain = |v: usize| e.chains.get(v).unwrap_or(&empty);

    let disconnected_chains: Vec<usize> = (0..n).filter(|&v| !chain_is_connected(chain(v), target)).collect();
    let shared_qubits = e.overlaps();
    let uncovered_edges: Vec<(usize, usize)> = source
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| !chain(u).iter().any(|&a| chain(v).iter().any(|&b| target.has_coupler(a, b))))
        .collect();

    ValidityReport {
        connected: disconnected_chains.is_empty(),
        disjoint: shared_qubits.is_empty(),
        edges_covered: uncovered_edges.is_empty(),
        disconnected_chains,
        shared_qubits,
        uncovered_edges,
    }
}

/// `{"phi": {"v": [qubit ids]}, "chain_strength": float | {"v": float}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingFile {
    pub phi: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain_strength: Option<Value>,
}

impl From<&Embedding> for EmbeddingFile {
    fn from(e: &Embedding) -> Self {
        let phi = e
            .chains
            .iter()
            .enumerate()
            .map(|(v, c)| (v.to_string(), Value::from(c.clone())))
            .collect();
        let chain_strength = e.chain_strength.as_ref().map(|s| match s {
            ChainStrength::Uniform(f) => crate::io::number(*f),
            ChainStrength::PerChain(fs) => {
                Value::Object(index_map(fs.iter().enumerate().map(|(v, f)| (v.to_string(), *f))))
            }
        });
        Self { phi, chain_strength }
    }
}

impl TryFrom<EmbeddingFile> for Embedding {
    type Error = Error;

    fn try_from(f: EmbeddingFile) -> Result<Self> {
        let mut chains: Vec<Vec<usize>> = Vec::new();
        for (k, qs) in &f.phi {
            let v = parse_index(k, "phi")?;
            let qs: Vec<usize> = serde_json::from_value(qs.clone())
                .map_err(|_| Error::Format(format!("chain of {k:?} is not a list of qubit ids")))?;
            if chains.len() <= v {
                chains.resize(v + 1, Vec::new());
            }
            chains[v].extend(qs);
        }
        let e = Embedding::new_unchecked(chains);
        let strength = match f.chain_strength {
            None | Some(Value::Null) => None,
            Some(Value::Object(map)) => {
                let mut fs = vec![0.0; e.len()];
                for (k, w) in &map {
                    let v = parse_index(k, "chain_strength")?;
                    *fs.get_mut(v)
                        .ok_or_else(|| Error::Format(format!("chain_strength key {v} has no chain")))? =
                        as_f64(w, "chain_strength")?;
                }
                Some(ChainStrength::PerChain(fs))
            }
            Some(w) => Some(ChainStrength::Uniform(as_f64(&w, "chain_strength")?)),
        };
        match strength {
            Some(s) => e.with_chain_strength(s),
            None => Ok(e),
        }
    }
}

pub fn read_embedding(path: &Path) -> Result<Embedding> {
    read_json::<EmbeddingFile>(path)?.try_into()
}

pub fn write_embedding(path: &Path, e: &Embedding) -> Result<()> {
    write_json(path, &EmbeddingFile::from(e))
}
