//! Hardware target graphs: the Chimera family, qubit masking, and a
//! deterministic clique minor embedding.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::embedding::Embedding;
use crate::error::{invalid, Error, Result};
use crate::io::{read_json, write_json};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyMeta {
    pub family: String,
    pub m: usize,
    pub l: usize,
}

/// Physical qubits and the couplers between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    qubits: BTreeSet<usize>,
    couplers: BTreeSet<(usize, usize)>,
    meta: Option<TopologyMeta>,
}

/// Dense re-indexing of a topology for graph searches.
#[derive(Debug, Clone)]
pub struct CompactTopology {
    pub ids: Vec<usize>,
    pub index: HashMap<usize, usize>,
    pub adj: Vec<Vec<usize>>,
}

impl Topology {
    pub fn new(
        qubits: impl IntoIterator<Item = usize>,
        couplers: impl IntoIterator<Item = (usize, usize)>,
        meta: Option<TopologyMeta>,
    ) -> Result<Self> {
        let qubits: BTreeSet<usize> = qubits.into_iter().collect();
        let mut set = BTreeSet::new();
        for (a, b) in couplers {
            if a == b {
                return Err(invalid(format!("self-coupler on qubit {a}")));
            }
            if !qubits.contains(&a) || !qubits.contains(&b) {
                return Err(invalid(format!("coupler ({a},{b}) touches a missing qubit")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self { qubits, couplers: set, meta })
    }

    pub fn qubits(&self) -> &BTreeSet<usize> {
        &self.qubits
    }

    pub fn couplers(&self) -> &BTreeSet<(usize, usize)> {
        &self.couplers
    }

    pub fn meta(&self) -> Option<&TopologyMeta> {
        self.meta.as_ref()
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits.len()
    }

    pub fn coupler_count(&self) -> usize {
        self.couplers.len()
    }

    pub fn has_qubit(&self, q: usize) -> bool {
        self.qubits.contains(&q)
    }

    pub fn has_coupler(&self, a: usize, b: usize) -> bool {
        self.couplers.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut adj: BTreeMap<usize, Vec<usize>> = self.qubits.iter().map(|&q| (q, Vec::new())).collect();
        for &(a, b) in &self.couplers {
            adj.get_mut(&a).expect("validated").push(b);
            adj.get_mut(&b).expect("validated").push(a);
        }
        adj
    }

    pub fn compact(&self) -> CompactTopology {
        let ids: Vec<usize> = self.qubits.iter().copied().collect();
        let index: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for &(a, b) in &self.couplers {
            let (ia, ib) = (index[&a], index[&b]);
            adj[ia].push(ib);
            adj[ib].push(ia);
        }
        CompactTopology { ids, index, adj }
    }
}

/// Qubit id of `(row, col, side, k)` in an `m×m` Chimera grid of `K_{l,l}` cells.
pub fn chimera_id(m: usize, l: usize, row: usize, col: usize, side: usize, k: usize) -> usize {
    ((row * m + col) * 2 + side) * l + k
}

/// Inverse of [`chimera_id`].
pub fn chimera_coords(m: usize, l: usize, id: usize) -> (usize, usize, usize, usize) {
    let k = id % l;
    let rest = id / l;
    let side = rest % 2;
    let cell = rest / 2;
    (cell / m, cell % m, side, k)
}

/// Chimera graph: side 0 is the vertical shore, side 1 the horizontal one.
pub fn chimera(m: usize, l: usize) -> Result<Topology> {
    if m == 0 || l == 0 {
        return Err(invalid("chimera needs m >= 1 and l >= 1"));
    }
    let id = |r, c, side, k| chimera_id(m, l, r, c, side, k);
    let mut couplers = Vec::with_capacity(l * l * m * m + 2 * l * m * (m - 1));
    for r in 0..m {
        for c in 0..m {
            for a in 0..l {
                for b in 0..l {
                    couplers.push((id(r, c, 0, a), id(r, c, 1, b)));
                }
                if r + 1 < m {
                    couplers.push((id(r, c, 0, a), id(r + 1, c, 0, a)));
                }
                if c + 1 < m {
                    couplers.push((id(r, c, 1, a), id(r, c + 1, 1, a)));
                }
            }
        }
    }
    let meta = TopologyMeta { family: "chimera".into(), m, l };
    Topology::new(0..2 * l * m * m, couplers, Some(meta))
}

/// Cross construction of a `K_{4m}` minor on `chimera(m, 4)`: logical `i`
/// owns the vertical line of column `i / 4` and the horizontal line of row
/// `i / 4`, both on lane `i % 4`.
pub fn chimera_clique_embedding(m: usize) -> Result<Embedding> {
    if m == 0 {
        return Err(invalid("clique embedding needs m >= 1"));
    }
    const L: usize = 4;
    let chains = (0..L * m).map(|i| {
        let (b, k) = (i / L, i % L);
        let vertical = (0..m).map(move |r| chimera_id(m, L, r, b, 0, k));
        let horizontal = (0..m).map(move |c| chimera_id(m, L, b, c, 1, k));
        vertical.chain(horizontal).collect::<Vec<_>>()
    });
    Embedding::new(chains.collect())
}

/// Drops `dead` qubits and every coupler touching them.
pub fn remove_qubits(t: &Topology, dead: &BTreeSet<usize>) -> Result<Topology> {
    if let Some(q) = dead.iter().find(|q| !t.qubits.contains(q)) {
        return Err(invalid(format!("qubit {q} is not in the topology")));
    }
    Ok(Topology {
        qubits: t.qubits.difference(dead).copied().collect(),
        couplers: t
            .couplers
            .iter()
            .filter(|(a, b)| !dead.contains(a) && !dead.contains(b))
            .copied()
            .collect(),
        meta: t.meta.clone(),
    })
}

/// `{"qubits": [int], "couplers": [[int,int]], "meta": {...}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopologyFile {
    pub qubits: Vec<usize>,
    pub couplers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<TopologyMeta>,
}

impl From<&Topology> for TopologyFile {
    fn from(t: &Topology) -> Self {
        Self {
            qubits: t.qubits.iter().copied().collect(),
            couplers: t.couplers.iter().map(|&(a, b)| [a, b]).collect(),
            meta: t.meta.clone(),
        }
    }
}

impl TryFrom<TopologyFile> for Topology {
    type Error = Error;

    fn try_from(f: TopologyFile) -> Result<Self> {
        Topology::new(f.qubits, f.couplers.into_iter().map(|[a, b]| (a, b)), f.meta)
    }
}

pub fn read_topology(path: &Path) -> Result<Topology> {
    read_json::<TopologyFile>(path)?.try_into()
}

pub fn write_topology(path: &Path, t: &Topology) -> Result<()> {
    write_json(path, &TopologyFile::from(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chimera_examples() {
        let t = chimera(1, 4).unwrap();
        assert_eq!((t.qubit_count(), t.coupler_count()), (8, 16));
        let t = chimera(2, 4).unwrap();
        assert_eq!((t.qubit_count(), t.coupler_count()), (32, 80));
        let t = chimera(1, 1).unwrap();
        assert_eq!((t.qubit_count(), t.coupler_count()), (2, 1));
        assert!(chimera(0, 4).is_err());
    }

    #[test]
    fn chimera_counts_match_closed_form() {
        for m in 1..=6 {
            for l in 1..=4 {
                let t = chimera(m, l).unwrap();
                assert_eq!(t.qubit_count(), 2 * l * m * m);
                assert_eq!(t.coupler_count(), l * l * m * m + 2 * l * m * (m - 1));
            }
        }
    }

    #[test]
    fn chimera_inter_cell_wiring() {
        let (m, l) = (3, 2);
        let t = chimera(m, l).unwrap();
        assert!(t.has_coupler(chimera_id(m, l, 0, 1, 0, 1), chimera_id(m, l, 1, 1, 0, 1)));
        assert!(t.has_coupler(chimera_id(m, l, 2, 0, 1, 0), chimera_id(m, l, 2, 1, 1, 0)));
        assert!(!t.has_coupler(chimera_id(m, l, 0, 0, 1, 0), chimera_id(m, l, 1, 0, 1, 0)));
        assert!(!t.has_coupler(chimera_id(m, l, 0, 0, 0, 0), chimera_id(m, l, 0, 0, 0, 1)));
    }

    #[test]
    fn coordinates_round_trip() {
        for (m, l) in [(1, 1), (3, 4), (6, 2)] {
            for id in 0..2 * l * m * m {
                let (r, c, s, k) = chimera_coords(m, l, id);
                assert_eq!(chimera_id(m, l, r, c, s, k), id);
            }
        }
    }

    #[test]
    fn clique_embedding_shapes() {
        let e = chimera_clique_embedding(1).unwrap();
        assert_eq!(e.len(), 4);
        assert!(e.chains().iter().all(|c| c.len() == 2));
        assert_eq!(e.qubit_count(), 8);

        let e = chimera_clique_embedding(2).unwrap();
        assert_eq!(e.len(), 8);
        assert!(e.chains().iter().all(|c| c.len() == 4));
        assert_eq!(e.qubit_count(), 32);
    }

    #[test]
    fn remove_qubits_examples() {
        let t = chimera(1, 4).unwrap();
        assert_eq!(remove_qubits(&t, &BTreeSet::new()).unwrap(), t);

        let r = remove_qubits(&t, &BTreeSet::from([chimera_id(1, 4, 0, 0, 0, 2)])).unwrap();
        assert_eq!((r.qubit_count(), r.coupler_count()), (7, 12));

        let all: BTreeSet<usize> = t.qubits().clone();
        let r = remove_qubits(&t, &all).unwrap();
        assert_eq!((r.qubit_count(), r.coupler_count()), (0, 0));

        assert!(remove_qubits(&t, &BTreeSet::from([99])).is_err());
    }

    #[test]
    fn topology_rejects_dangling_coupler() {
        assert!(Topology::new([0, 1], [(0, 2)], None).is_err());
        assert!(Topology::new([0, 1], [(1, 1)], None).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = chimera(2, 2).unwrap();
        let text = serde_json::to_string(&TopologyFile::from(&t)).unwrap();
        let back: TopologyFile = serde_json::from_str(&text).unwrap();
        assert_eq!(Topology::try_from(back).unwrap(), t);
    }
}
