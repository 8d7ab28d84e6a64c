use std::str::FromStr;

use super::brute::brute_force_ground;
use crate::bounds::choi_bound_global;
use crate::embedding::{embed_model, ChainStrength, EmbeddedModel, Embedding};
use crate::error::{invalid, Error, Result};
use crate::ising::IsingModel;
use crate::topology::Topology;

/// Internal coupler pattern of a multi-qubit logical vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingShape {
    /// Path `q0 – q1 – … – q(k−1)`.
    Chain,
    /// The path closed into a ring.
    Cycle,
    /// All pairs coupled.
    Clique,
}

impl EncodingShape {
    pub const ALL: [Self; 3] = [Self::Chain, Self::Cycle, Self::Clique];

    pub fn name(self) -> &'static str {
        match self {
            Self::Chain => "chain",
            Self::Cycle => "cycle",
            Self::Clique => "clique",
        }
    }

    fn internal_edges(self, k: usize) -> Vec<(usize, usize)> {
        match self {
            Self::Chain => (1..k).map(|i| (i - 1, i)).collect(),
            Self::Cycle if k >= 3 => (0..k).map(|i| (i, (i + 1) % k)).collect(),
            Self::Cycle => Self::Chain.internal_edges(k),
            Self::Clique => (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect(),
        }
    }
}

impl FromStr for EncodingShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|shape| shape.name() == s)
            .ok_or_else(|| invalid(format!("unknown encoding {s:?} (chain, cycle, clique)")))
    }
}

/// Embeds `model` natively except for vertex `v`, which becomes `size`
/// physical qubits wired as `shape`.
///
/// Qubit `u` hosts logical `u < v`, qubit `u − 1` hosts `u > v`, and the
/// encoding occupies the last `size` qubits. The `i`-th neighbour of `v`
/// attaches to encoding qubit `i mod size`, independently of the shape, so
/// the three shapes differ only in their internal couplers.
pub fn encode_vertex(model: &IsingModel, v: usize, shape: EncodingShape, size: usize) -> Result<(Embedding, Topology)> {
    let n = model.n();
    if v >= n {
        return Err(invalid(format!("vertex {v} not in model with {n} vertices")));
    }
    if size == 0 {
        return Err(invalid("encoding needs at least one qubit"));
    }
    let base = n - 1;
    let host = |u: usize| if u < v { u } else { u - 1 };
    let chains: Vec<Vec<usize>> =
        (0..n).map(|u| if u == v { (base..base + size).collect() } else { vec![host(u)] }).collect();

    let mut couplers: Vec<(usize, usize)> = shape.internal_edges(size).into_iter().map(|(a, b)| (base + a, base + b)).collect();
    let mut attached = 0;
    for &(a, b) in model.graph().edges() {
        if a == v || b == v {
            let other = if a == v { b } else { a };
            couplers.push((host(other), base + attached % size));
            attached += 1;
        } else {
            couplers.push((host(a), host(b)));
        }
    }
    let topology = Topology::new(0..base + size, couplers, None)?;
    Ok((Embedding::new(chains)?, topology))
}

fn maintained(em: &EmbeddedModel) -> Result<bool> {
    let ground = brute_force_ground(em.physical())?;
    Ok(ground.minimizers.iter().all(|a| {
        em.ferro_edges().iter().all(|f| a[f.a] == a[f.b])
    }))
}

/// Smallest uniform chain magnitude (to within `tol`) at which every
/// brute-force ground state of the embedded model has all chains intact,
/// found by bisection on `[0, choi_bound_global + 1]`.
pub fn min_maintaining_strength(model: &IsingModel, e: &Embedding, target: &Topology, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(invalid("bisection tolerance must be positive"));
    }
    let build = |f: f64| embed_model(model, e, target, &ChainStrength::Uniform(f));
    let at_zero = build(0.0)?;
    if at_zero.ferro_edges().is_empty() || maintained(&at_zero)? {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = choi_bound_global(model)?.magnitude + 1.0;
    if !maintained(&build(hi)?)? {
        return Err(Error::BracketExhausted { hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if maintained(&build(mid)?)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
