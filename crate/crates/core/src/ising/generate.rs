use rand::seq::SliceRandom;
use rand::Rng as _;

use super::Graph;
use crate::error::{invalid, Error, Result};
use crate::rng::seeded;

/// Pairing attempts before [`gen_d_regular`] gives up.
pub const D_REGULAR_RETRIES: usize = 1000;

/// G(n, p): every unordered pair enters independently with probability `p`.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = seeded(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Random d-regular graph by the configuration (pairing) model, rejecting
/// pairings with loops or multi-edges.
pub fn gen_d_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d >= n {
        return Err(invalid(format!("degree {d} must be below n={n}")));
    }
    if n * d % 2 == 1 {
        return Err(invalid(format!("n*d = {} is odd", n * d)));
    }
    let mut rng = seeded(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..D_REGULAR_RETRIES {
        stubs.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(stubs.len() / 2);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v {
                continue 'attempt;
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Graph::new(n, edges);
    }
    Err(Error::GenerationFailure(format!(
        "no simple {d}-regular pairing on {n} vertices in {D_REGULAR_RETRIES} attempts"
    )))
}
