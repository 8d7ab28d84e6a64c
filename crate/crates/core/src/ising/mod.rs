//! Logical Ising problems: graphs, weights, spin assignments and the
//! classical cost function `C(x) = Σ h_v x_v + Σ J_uv x_u x_v`.

mod generate;
mod json;

use std::collections::BTreeMap;
use std::ops::Deref;

use crate::error::{invalid, Result};

pub use generate::{gen_d_regular, gen_erdos_renyi, D_REGULAR_RETRIES};
pub use json::{read_model, write_model, ModelFile};

/// Hardware-like limits used by [`autoscale`] when nothing else is given.
pub const DEFAULT_H_RANGE: [f64; 2] = [-2.0, 2.0];
pub const DEFAULT_J_RANGE: [f64; 2] = [-1.0, 1.0];

/// Simple undirected graph on dense vertex ids `0..n`.
///
/// Edges are stored normalized (`u < v`), sorted and unique.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(invalid(format!("self-loop on vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(invalid(format!("edge ({u},{v}) out of range for n={n}")));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        let before = out.len();
        out.dedup();
        if out.len() != before {
            return Err(invalid("duplicate edge"));
        }
        Ok(Self { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Adjacency lists holding `(neighbor, edge index)` pairs.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        adj
    }

    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        2.0 * self.edges.len() as f64 / self.n as f64
    }
}

/// A vector of ±1 spins indexed by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<i8>);

impl Assignment {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(invalid(format!("spin value {bad} is not ±1")));
        }
        Ok(Self(spins))
    }

    pub fn all_up(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Basis-state decoding: bit `i` of `index` clear means spin `+1` on vertex `i`.
    pub fn from_index(index: u64, n: usize) -> Self {
        Self((0..n).map(|i| if index >> i & 1 == 0 { 1 } else { -1 }).collect())
    }

    pub fn into_inner(self) -> Vec<i8> {
        self.0
    }
}

impl Deref for Assignment {
    type Target = [i8];

    fn deref(&self) -> &[i8] {
        &self.0
    }
}

/// Logical Ising problem. `h` is indexed by vertex, `j` is aligned with
/// `graph.edges()`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    graph: Graph,
    h: Vec<f64>,
    j: Vec<f64>,
}

impl IsingModel {
    pub fn from_parts(graph: Graph, h: Vec<f64>, j: Vec<f64>) -> Result<Self> {
        if h.len() != graph.n() {
            return Err(invalid(format!("h has {} entries for {} vertices", h.len(), graph.n())));
        }
        if j.len() != graph.edge_count() {
            return Err(invalid(format!(
                "J has {} entries for {} edges",
                j.len(),
                graph.edge_count()
            )));
        }
        if h.iter().chain(&j).any(|w| !w.is_finite()) {
            return Err(invalid("non-finite weight"));
        }
        Ok(Self { graph, h, j })
    }

    /// Builds a model from sparse maps. The graph's edge set is the key set of `j`.
    pub fn new(
        n: usize,
        h: impl IntoIterator<Item = (usize, f64)>,
        j: impl IntoIterator<Item = ((usize, usize), f64)>,
    ) -> Result<Self> {
        let mut hv = vec![0.0; n];
        for (v, w) in h {
            if v >= n {
                return Err(invalid(format!("h key {v} out of range for n={n}")));
            }
            hv[v] += w;
        }
        let mut jm = BTreeMap::new();
        for ((u, v), w) in j {
            if jm.insert((u.min(v), u.max(v)), w).is_some() {
                return Err(invalid(format!("duplicate J key ({u},{v})")));
            }
        }
        let graph = Graph::new(n, jm.keys().copied())?;
        let jv = jm.into_values().collect();
        Self::from_parts(graph, hv, jv)
    }

    /// Zero weights on every vertex and edge of `graph`.
    pub fn zeros(graph: Graph) -> Self {
        let (n, m) = (graph.n(), graph.edge_count());
        Self { graph, h: vec![0.0; n], j: vec![0.0; m] }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn j(&self) -> &[f64] {
        &self.j
    }

    pub fn coupling(&self, u: usize, v: usize) -> f64 {
        self.graph.edge_index(u, v).map_or(0.0, |e| self.j[e])
    }

    /// Iterator over `((u, v), J_uv)`.
    pub fn couplings(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.graph.edges().iter().copied().zip(self.j.iter().copied())
    }

    /// Every weight multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            graph: self.graph.clone(),
            h: self.h.iter().map(|w| w * c).collect(),
            j: self.j.iter().map(|w| w * c).collect(),
        }
    }

    /// Largest absolute weight, used for tolerance scaling.
    pub fn max_abs_weight(&self) -> f64 {
        self.h.iter().chain(&self.j).fold(0.0_f64, |m, w| m.max(w.abs()))
    }

    /// Sum of absolute weights: an upper bound on `|C(x)|`.
    pub fn weight_mass(&self) -> f64 {
        self.h.iter().chain(&self.j).map(|w| w.abs()).sum()
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(invalid(format!("assignment has {got} spins, expected {expected}")));
    }
    Ok(())
}

/// Classical Ising cost `Σ h_v x_v + Σ J_uv x_u x_v`.
pub fn energy(model: &IsingModel, spins: &[i8]) -> Result<f64> {
    check_len(model.n(), spins.len())?;
    Ok(energy_unchecked(model, spins))
}

pub(crate) fn energy_unchecked(model: &IsingModel, spins: &[i8]) -> f64 {
    let mut e = 0.0;
    for (h, &x) in model.h.iter().zip(spins) {
        e += h * f64::from(x);
    }
    for (&(u, v), w) in model.graph.edges.iter().zip(&model.j) {
        e += w * f64::from(spins[u] * spins[v]);
    }
    e
}

/// Max-cut as Ising: unit antiferromagnetic couplers, no fields.
pub fn maxcut_to_ising(g: &Graph) -> IsingModel {
    IsingModel { graph: g.clone(), h: vec![0.0; g.n()], j: vec![1.0; g.edge_count()] }
}

/// Number of edges whose endpoints disagree.
pub fn cut_size(g: &Graph, spins: &[i8]) -> Result<usize> {
    check_len(g.n(), spins.len())?;
    Ok(g.edges().iter().filter(|&&(u, v)| spins[u] != spins[v]).count())
}

fn range_limit(range: [f64; 2], what: &str) -> Result<f64> {
    let [lo, hi] = range;
    if !(lo < 0.0 && hi > 0.0) || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid(format!("{what} [{lo}, {hi}] must strictly contain 0")));
    }
    Ok(lo.abs().min(hi.abs()))
}

/// Divides every weight by the smallest factor `>= 1` that brings all of
/// them inside the given ranges.
pub fn autoscale(model: &IsingModel, h_range: [f64; 2], j_range: [f64; 2]) -> Result<(IsingModel, f64)> {
    let h_lim = range_limit(h_range, "h_range")?;
    let j_lim = range_limit(j_range, "j_range")?;
    let h_max = model.h.iter().fold(0.0_f64, |m, w| m.max(w.abs()));
    let j_max = model.j.iter().fold(0.0_f64, |m, w| m.max(w.abs()));
    let factor = 1.0_f64.max(h_max / h_lim).max(j_max / j_lim);
    if factor == 1.0 {
        return Ok((model.clone(), 1.0));
    }
    let scaled = IsingModel {
        graph: model.graph.clone(),
        h: model.h.iter().map(|w| w / factor).collect(),
        j: model.j.iter().map(|w| w / factor).collect(),
    };
    Ok((scaled, factor))
}

/// Root mean square of the couplers over the edges of the graph.
pub fn coupling_rms(model: &IsingModel) -> Result<f64> {
    if model.j.is_empty() {
        return Err(invalid("coupling RMS needs at least one edge"));
    }
    let sq: f64 = model.j.iter().map(|w| w * w).sum();
    Ok((sq / model.j.len() as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::complete(3)
    }

    fn a(v: &[i8]) -> Assignment {
        Assignment::new(v.to_vec()).unwrap()
    }

    #[test]
    fn energy_examples() {
        let m = IsingModel::new(1, [(0, 1.0)], []).unwrap();
        assert_eq!(energy(&m, &a(&[1])).unwrap(), 1.0);

        let m = IsingModel::new(2, [], [((0, 1), 1.0)]).unwrap();
        assert_eq!(energy(&m, &a(&[1, -1])).unwrap(), -1.0);

        let m = maxcut_to_ising(&k3());
        assert_eq!(energy(&m, &a(&[1, 1, -1])).unwrap(), -1.0);
    }

    #[test]
    fn energy_dimension_mismatch() {
        let m = maxcut_to_ising(&k3());
        assert!(matches!(energy(&m, &a(&[1, 1])), Err(crate::Error::InvalidArgument(_))));
    }

    #[test]
    fn assignment_rejects_zero_spin() {
        assert!(Assignment::new(vec![1, 0]).is_err());
        assert_eq!(&*Assignment::from_index(0b10, 3), &[1, -1, 1]);
    }

    #[test]
    fn graph_rejects_bad_edges() {
        assert!(Graph::new(3, [(1, 1)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn maxcut_examples() {
        let m = maxcut_to_ising(&k3());
        assert_eq!(m.couplings().collect::<Vec<_>>(), vec![((0, 1), 1.0), ((0, 2), 1.0), ((1, 2), 1.0)]);
        assert_eq!(m.h(), &[0.0; 3]);

        let m = maxcut_to_ising(&Graph::empty(3));
        assert!(m.j().is_empty());
        assert_eq!(m.h(), &[0.0; 3]);

        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let m = maxcut_to_ising(&path);
        assert_eq!(m.couplings().collect::<Vec<_>>(), vec![((0, 1), 1.0), ((1, 2), 1.0)]);
    }

    #[test]
    fn cut_size_examples() {
        assert_eq!(cut_size(&k3(), &a(&[1, 1, -1])).unwrap(), 2);
        assert_eq!(cut_size(&Graph::complete(5), &Assignment::all_up(5)).unwrap(), 0);
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(cut_size(&c4, &a(&[1, -1, 1, -1])).unwrap(), 4);
        assert!(cut_size(&c4, &a(&[1])).is_err());
    }

    #[test]
    fn autoscale_examples() {
        let m = IsingModel::new(1, [(0, 4.0)], []).unwrap();
        let (s, f) = autoscale(&m, [-2.0, 2.0], [-1.0, 1.0]).unwrap();
        assert_eq!(f, 2.0);
        assert_eq!(s.h(), &[2.0]);

        let m = IsingModel::new(2, [(0, 0.5)], [((0, 1), -0.25)]).unwrap();
        let (s, f) = autoscale(&m, DEFAULT_H_RANGE, DEFAULT_J_RANGE).unwrap();
        assert_eq!(f, 1.0);
        assert_eq!(s, m);

        let m = IsingModel::new(2, [], [((0, 1), -3.0)]).unwrap();
        let (s, f) = autoscale(&m, DEFAULT_H_RANGE, [-1.0, 1.0]).unwrap();
        assert_eq!(f, 3.0);
        assert_eq!(s.j(), &[-1.0]);
    }

    #[test]
    fn autoscale_asymmetric_range_uses_tighter_side() {
        let m = IsingModel::new(2, [], [((0, 1), 1.6)]).unwrap();
        let (s, f) = autoscale(&m, DEFAULT_H_RANGE, [-2.0, 0.8]).unwrap();
        assert_eq!(f, 2.0);
        assert_eq!(s.j(), &[0.8]);
    }

    #[test]
    fn autoscale_rejects_ranges_without_zero() {
        let m = IsingModel::new(1, [(0, 1.0)], []).unwrap();
        assert!(autoscale(&m, [0.5, 2.0], DEFAULT_J_RANGE).is_err());
        assert!(autoscale(&m, DEFAULT_H_RANGE, [1.0, -1.0]).is_err());
        assert!(autoscale(&m, [0.0, 0.0], DEFAULT_J_RANGE).is_err());
    }

    #[test]
    fn coupling_rms_examples() {
        assert_eq!(coupling_rms(&maxcut_to_ising(&k3())).unwrap(), 1.0);
        let m = IsingModel::new(3, [], [((0, 1), 3.0), ((1, 2), 4.0)]).unwrap();
        assert!((coupling_rms(&m).unwrap() - 12.5_f64.sqrt()).abs() < 1e-15);
        let m = IsingModel::new(3, [], [((0, 1), -1.0), ((1, 2), 1.0)]).unwrap();
        assert_eq!(coupling_rms(&m).unwrap(), 1.0);
        assert!(coupling_rms(&IsingModel::zeros(Graph::empty(2))).is_err());
    }
}
