#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use chaingauge::embedding::Embedding;
use chaingauge::ising::{Graph, IsingModel};
use chaingauge::rng::seeded;
use chaingauge::topology::Topology;
use rand::Rng;

/// Term-by-term `Σ h_i x_i + Σ J_ij x_i x_j`.
pub fn energy_oracle(n: usize, h: &[f64], couplings: &[((usize, usize), f64)], x: &[i8]) -> f64 {
    assert_eq!(x.len(), n);
    let mut e = 0.0;
    for i in 0..n {
        e += h[i] * f64::from(x[i]);
    }
    for &((u, v), w) in couplings {
        e += w * f64::from(x[u]) * f64::from(x[v]);
    }
    e
}

pub fn model_energy(m: &IsingModel, x: &[i8]) -> f64 {
    let couplings: Vec<_> = m.couplings().collect();
    energy_oracle(m.n(), m.h(), &couplings, x)
}

/// Spins of state `k`: bit `i` set means spin `i` is −1.
pub fn spins_of(k: u64, n: usize) -> Vec<i8> {
    (0..n).map(|i| if k >> i & 1 == 1 { -1 } else { 1 }).collect()
}

pub fn all_energies(m: &IsingModel) -> Vec<f64> {
    (0..1u64 << m.n())
        .map(|k| model_energy(m, &spins_of(k, m.n())))
        .collect()
}

pub fn minimizers(energies: &[f64], tol: f64) -> BTreeSet<usize> {
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    energies
        .iter()
        .enumerate()
        .filter(|(_, e)| **e - min <= tol)
        .map(|(i, _)| i)
        .collect()
}

/// Random model on `n` vertices with edge probability `p` and weights in `[-w, w]`.
pub fn random_model(n: usize, p: f64, w: f64, seed: u64) -> IsingModel {
    let mut rng = seeded(seed);
    let h: Vec<(usize, f64)> = (0..n).map(|i| (i, rng.random_range(-w..=w))).collect();
    let mut j = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                j.push(((u, v), rng.random_range(-w..=w)));
            }
        }
    }
    IsingModel::new(n, h, j).unwrap()
}

/// Random valid embedding of `g` on a purpose-built topology: chains are
/// paths of 1..=`max_chain` fresh qubits with optional extra internal
/// couplers, every logical edge gets one or two couplers between its chains,
/// and a few couplers between unrelated chains are added as noise.
pub fn random_embedding(g: &Graph, max_chain: usize, max_qubits: usize, seed: u64) -> (Embedding, Topology) {
    let mut rng = seeded(seed);
    let n = g.n();
    let mut budget = max_qubits.saturating_sub(n);
    let mut chains = Vec::with_capacity(n);
    let mut next = 0;
    let mut couplers = Vec::new();
    for _ in 0..n {
        let extra = rng.random_range(0..max_chain).min(budget);
        budget -= extra;
        let chain: Vec<usize> = (next..next + extra + 1).collect();
        next += extra + 1;
        for w in chain.windows(2) {
            couplers.push((w[0], w[1]));
        }
        for a in 0..chain.len() {
            for b in a + 2..chain.len() {
                if rng.random::<f64>() < 0.3 {
                    couplers.push((chain[a], chain[b]));
                }
            }
        }
        chains.push(chain);
    }
    let pick = |rng: &mut chaingauge::rng::Rng, c: &Vec<usize>| c[rng.random_range(0..c.len())];
    for &(u, v) in g.edges() {
        for _ in 0..rng.random_range(1..=2) {
            let (a, b) = (pick(&mut rng, &chains[u]), pick(&mut rng, &chains[v]));
            couplers.push((a, b));
        }
    }
    for _ in 0..2 {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        if u != v && !g.has_edge(u, v) {
            let (a, b) = (pick(&mut rng, &chains[u]), pick(&mut rng, &chains[v]));
            couplers.push((a, b));
        }
    }
    let t = Topology::new(0..next, couplers, None).unwrap();
    (Embedding::new(chains).unwrap(), t)
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                r[k] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chaingauge"))
}

pub fn ok(dir: &Path, args: &[&str]) {
    let out = bin().current_dir(dir).args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

/// Runs every subcommand once in `dir`, chained through files; returns the
/// produced files in sorted order.
pub fn pipeline(dir: &Path) -> Vec<PathBuf> {
    ok(
        dir,
        &[
            "gen", "--type", "er", "--n", "8", "--p", "0.5", "--seed", "4", "-o", "g.json",
        ],
    );
    ok(dir, &["topo", "chimera", "--m", "2", "-o", "t.json"]);
    ok(
        dir,
        &[
            "embed",
            "greedy",
            "--model",
            "g.json",
            "--topology",
            "t.json",
            "--seed",
            "2",
            "-o",
            "e.json",
        ],
    );
    ok(
        dir,
        &[
            "embed",
            "validate",
            "--model",
            "g.json",
            "--topology",
            "t.json",
            "--embedding",
            "e.json",
            "-o",
            "v.json",
        ],
    );
    ok(dir, &["bounds", "--model", "g.json", "-o", "b.json"]);
    let emb = ["--model", "g.json", "--topology", "t.json", "--embedding", "e.json"];
    let tune: Vec<&str> = ["tune"]
        .iter()
        .chain(&emb)
        .chain(&[
            "--cb-lo",
            "0.05",
            "--cb-hi",
            "0.1",
            "--seed",
            "3",
            "--sweeps",
            "32",
            "-o",
            "trace.csv",
        ])
        .copied()
        .collect();
    ok(dir, &tune);
    let scan: Vec<&str> = ["scan"]
        .iter()
        .chain(&emb)
        .chain(&[
            "--from", "0.5", "--to", "4", "--points", "4", "--shots", "64", "--seed", "5", "--sweeps", "32", "-o",
            "scan.csv",
        ])
        .copied()
        .collect();
    ok(dir, &scan);
    ok(
        dir,
        &[
            "sample", "--model", "g.json", "--shots", "50", "--seed", "6", "-o", "ss.json",
        ],
    );
    ok(
        dir,
        &[
            "sample",
            "--model",
            "g.json",
            "--backend",
            "gibbs",
            "--beta",
            "0.5",
            "--shots",
            "50",
            "--seed",
            "6",
            "-o",
            "gibbs.json",
        ],
    );
    ok(
        dir,
        &[
            "sample",
            "--model",
            "g.json",
            "--backend",
            "replay",
            "--replay",
            "ss.json",
            "-o",
            "replay.json",
        ],
    );
    let stats: Vec<&str> = ["stats"]
        .iter()
        .chain(&emb)
        .chain(&["-o", "stats.json"])
        .copied()
        .collect();
    ok(dir, &stats);
    ok(
        dir,
        &[
            "topo",
            "remove-qubits",
            "--topology",
            "t.json",
            "--qubits",
            "0,5",
            "-o",
            "t2.json",
        ],
    );
    ok(dir, &["embed", "clique", "--m", "2", "-o", "clique.json"]);
    ok(
        dir,
        &[
            "gap",
            "--model",
            "g.json",
            "--points",
            "9",
            "--refine",
            "--summary",
            "gap.json",
            "-o",
            "prof.csv",
        ],
    );
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
}
