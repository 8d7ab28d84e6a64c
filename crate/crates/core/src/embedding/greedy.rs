use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng as _;

use super::{validate, Embedding};
use crate::error::{Error, Result};
use crate::ising::Graph;
use crate::rng::{derive_seed, seeded, Rng};
use crate::topology::{CompactTopology, Topology};

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyOptions {
    pub max_tries: usize,
    /// Rip-up-and-reroute passes per try once chains overlap.
    pub refine_passes: usize,
    /// Reject embeddings using more physical qubits than this.
    pub max_qubits: Option<usize>,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        Self { max_tries: 64, refine_passes: 64, max_qubits: None }
    }
}

const NONE: usize = usize::MAX;

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Node-weighted shortest paths from the neighbourhood of `chain`, never
/// entering `chain` itself. `dist[q]` includes the weight of `q`.
fn dijkstra(t: &CompactTopology, weight: &[f64], chain: &[usize]) -> (Vec<f64>, Vec<usize>) {
    let n = t.ids.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent = vec![NONE; n];
    let mut blocked = vec![false; n];
    for &q in chain {
        blocked[q] = true;
    }
    let mut heap = BinaryHeap::new();
    for &q in chain {
        for &p in &t.adj[q] {
            if !blocked[p] && weight[p] < dist[p] {
                dist[p] = weight[p];
                heap.push(Entry(weight[p], p));
            }
        }
    }
    while let Some(Entry(d, q)) = heap.pop() {
        if d > dist[q] {
            continue;
        }
        for &p in &t.adj[q] {
            let nd = d + weight[p];
            if !blocked[p] && nd < dist[p] {
                dist[p] = nd;
                parent[p] = q;
                heap.push(Entry(nd, p));
            }
        }
    }
    (dist, parent)
}

struct Attempt<'a> {
    target: &'a CompactTopology,
    adjacency: &'a [Vec<(usize, usize)>],
    chains: Vec<Vec<usize>>,
    placed: Vec<bool>,
    /// Chains currently holding each qubit.
    usage: Vec<u32>,
    /// Accumulated overuse, raising the price of contested qubits.
    history: Vec<f64>,
    rng: Rng,
}

impl Attempt<'_> {
    fn weights(&self, present: f64) -> Vec<f64> {
        self.usage
            .iter()
            .zip(&self.history)
            .map(|(&u, &h)| (1.0 + h) * (1.0 + present * f64::from(u)))
            .collect()
    }

    fn set_chain(&mut self, v: usize, chain: Vec<usize>) {
        for &q in &self.chains[v] {
            self.usage[q] -= 1;
        }
        for &q in &chain {
            self.usage[q] += 1;
        }
        self.chains[v] = chain;
    }

    /// Routes `v` to its placed neighbours: the root minimizes the summed
    /// path cost and the chain is the union of the paths back from it.
    fn place(&mut self, v: usize, present: f64) -> Option<()> {
        self.set_chain(v, Vec::new());
        let weight = self.weights(present);
        let neighbors: Vec<usize> = self.adjacency[v].iter().map(|&(u, _)| u).filter(|&u| self.placed[u]).collect();
        let n_qubits = self.target.ids.len();
        if neighbors.is_empty() {
            // prefer cheap, well-connected qubits for fresh components
            let key = |q: usize| (weight[q], std::cmp::Reverse(self.target.adj[q].iter().filter(|&&p| self.usage[p] == 0).count()));
            let best = (0..n_qubits).map(key).min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))?;
            let candidates: Vec<usize> = (0..n_qubits).filter(|&q| key(q) == best).collect();
            let root = *candidates.choose(&mut self.rng)?;
            self.set_chain(v, vec![root]);
            self.placed[v] = true;
            return Some(());
        }

        let searches: Vec<(Vec<f64>, Vec<usize>)> =
            neighbors.iter().map(|&u| dijkstra(self.target, &weight, &self.chains[u])).collect();
        let mut best: Option<(f64, u64, usize)> = None;
        for q in 0..n_qubits {
            // each search counts the root once
            let cost = searches.iter().map(|(d, _)| d[q] - weight[q]).sum::<f64>() + weight[q];
            if !cost.is_finite() {
                continue;
            }
            let tie = self.rng.random::<u64>();
            if best.is_none_or(|(c, t, _)| (cost, tie) < (c, t)) {
                best = Some((cost, tie, q));
            }
        }
        let (_, _, root) = best?;

        let mut chain = vec![root];
        for (_, parent) in &searches {
            let mut q = parent[root];
            while q != NONE {
                chain.push(q);
                q = parent[q];
            }
        }
        chain.sort_unstable();
        chain.dedup();
        self.set_chain(v, chain);
        self.placed[v] = true;
        Some(())
    }

    /// Reroutes chains of an overlap-free state one at a time with occupied
    /// qubits priced out, keeping a new route only if it is shorter and
    /// shares no qubit.
    fn shorten(&mut self, order: &mut [usize], occupied_price: f64, passes: usize) {
        self.history.iter_mut().for_each(|h| *h = 0.0);
        for _ in 0..passes {
            let mut improved = false;
            order.shuffle(&mut self.rng);
            for &v in order.iter() {
                let old = self.chains[v].clone();
                self.place(v, occupied_price);
                let shared = self.chains[v].iter().any(|&q| self.usage[q] > 1);
                if shared || self.chains[v].len() >= old.len() {
                    self.set_chain(v, old);
                } else {
                    improved = true;
                }
            }
            if !improved {
                return;
            }
        }
    }

    fn overused(&self) -> usize {
        self.usage.iter().filter(|&&u| u > 1).count()
    }
}

/// Removes chain qubits whose removal keeps the embedding valid.
fn prune(chains: &mut [Vec<usize>], source: &Graph, target: &Topology) {
    let adjacency = source.adjacency();
    loop {
        let mut changed = false;
        for v in 0..chains.len() {
            let mut i = 0;
            while i < chains[v].len() {
                if chains[v].len() == 1 {
                    break;
                }
                let q = chains[v].remove(i);
                let ok = super::chain_is_connected(&chains[v], target)
                    && adjacency[v].iter().all(|&(u, _)| {
                        chains[v].iter().any(|&a| chains[u].iter().any(|&b| target.has_coupler(a, b)))
                    });
                if ok {
                    changed = true;
                } else {
                    chains[v].insert(i, q);
                    i += 1;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Seeded greedy minor embedding.
///
/// Vertices are taken by decreasing degree (ties shuffled). Each is rooted
/// at the qubit with the smallest summed path cost to its placed
/// neighbours' chains and grown along those paths; occupied qubits cost far
/// more than free ones, so paths run through free qubits whenever they can.
/// If the first pass leaves qubits shared, chains are ripped up and
/// rerouted with rising congestion prices until no qubit is shared or the
/// pass budget runs out, in which case a new try starts from a fresh seed.
/// Successful embeddings are pruned and checked by [`validate`].
pub fn greedy_embed(source: &Graph, target: &Topology, seed: u64, opts: &GreedyOptions) -> Result<Embedding> {
    let compact = target.compact();
    let degrees = source.degrees();
    let adjacency = source.adjacency();
    let n = source.n();
    let occupied_price = compact.ids.len() as f64;
    for attempt in 0..opts.max_tries {
        let mut rng = seeded(derive_seed(seed, attempt as u64));
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        order.sort_by(|a, b| degrees[*b].cmp(&degrees[*a]));

        let mut state = Attempt {
            target: &compact,
            adjacency: &adjacency,
            chains: vec![Vec::new(); n],
            placed: vec![false; n],
            usage: vec![0; compact.ids.len()],
            history: vec![0.0; compact.ids.len()],
            rng,
        };
        if order.iter().any(|&v| state.place(v, occupied_price).is_none()) {
            continue;
        }
        let mut present = 1.0;
        for _ in 0..opts.refine_passes {
            if state.overused() == 0 {
                break;
            }
            order.shuffle(&mut state.rng);
            for &v in &order {
                state.place(v, present);
            }
            for (h, &u) in state.history.iter_mut().zip(&state.usage) {
                if u > 1 {
                    *h += f64::from(u - 1);
                }
            }
            present *= 1.5;
        }
        if state.overused() > 0 {
            continue;
        }
        state.shorten(&mut order, occupied_price, opts.refine_passes);
        let mut chains: Vec<Vec<usize>> =
            state.chains.iter().map(|c| c.iter().map(|&i| compact.ids[i]).collect()).collect();
        prune(&mut chains, source, target);
        let e = Embedding::new_unchecked(chains);
        if !validate(&e, source, target).is_valid() {
            continue;
        }
        if opts.max_qubits.is_some_and(|cap| e.qubit_count() > cap) {
            continue;
        }
        return Ok(e);
    }
    Err(Error::EmbeddingNotFound { tries: opts.max_tries })
}
