//! Sample generators behind a common contract: exact Gibbs sampling,
//! simulated annealing, and replay of stored sample sets.

use std::path::Path;

use rand::{Rng as _, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::ising::{energy_unchecked, Assignment, IsingModel};
use crate::rng::{derive_seed, seeded};
use crate::samples::{read_sample_set, SampleSet};
use crate::spectral::classical_energies;

/// Largest model [`gibbs_sample`] enumerates.
pub const GIBBS_CAP: usize = 20;

/// Anything that turns a physical model into `shots` samples, reproducibly in `seed`.
///
/// Returned labels are the model's vertex indices `0..n`.
pub trait Sampler {
    fn sample(&self, model: &IsingModel, shots: usize, seed: u64) -> Result<SampleSet>;
}

/// Simulated-annealing settings plus the shot count and seed of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub shots: usize,
    pub seed: u64,
    pub sweeps: usize,
    pub beta_hot: f64,
    pub beta_cold: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { shots: 128, seed: 0, sweeps: 128, beta_hot: 0.1, beta_cold: 10.0 }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(invalid("shots must be at least 1"));
        }
        if self.sweeps == 0 {
            return Err(invalid("sweeps must be at least 1"));
        }
        for beta in [self.beta_hot, self.beta_cold] {
            if !(beta > 0.0 && beta.is_finite()) {
                return Err(invalid(format!("inverse temperature {beta} must be positive and finite")));
            }
        }
        Ok(())
    }

    /// Geometric ladder from `beta_hot` to `beta_cold`, one value per sweep.
    pub fn betas(&self) -> Vec<f64> {
        if self.sweeps == 1 {
            return vec![self.beta_cold];
        }
        let ratio = self.beta_cold / self.beta_hot;
        let last = (self.sweeps - 1) as f64;
        (0..self.sweeps).map(|k| self.beta_hot * ratio.powf(k as f64 / last)).collect()
    }
}

/// Flat neighbour lists for the inner Metropolis loop.
struct Csr {
    start: Vec<usize>,
    nbr: Vec<usize>,
    weight: Vec<f64>,
}

impl Csr {
    fn new(model: &IsingModel) -> Self {
        let adj = model.graph().adjacency();
        let mut start = Vec::with_capacity(adj.len() + 1);
        let mut nbr = Vec::new();
        let mut weight = Vec::new();
        start.push(0);
        for list in &adj {
            for &(v, e) in list {
                nbr.push(v);
                weight.push(model.j()[e]);
            }
            start.push(nbr.len());
        }
        Self { start, nbr, weight }
    }
}

/// `u < e^-x` for `x > 0`, deciding most draws from the Taylor bounds
/// `1 - x + x²/2 - x³/6 <= e^-x <= 1 / (1 + x + x²/2 + x³/6)`.
#[inline]
fn metropolis(x: f64, u: f64) -> bool {
    let (x2, x3) = (x * x / 2.0, x * x * x / 6.0);
    if u < 1.0 - x + x2 - x3 {
        true
    } else if u * (1.0 + x + x2 + x3) >= 1.0 {
        false
    } else {
        u < (-x).exp()
    }
}

fn anneal_shot(model: &IsingModel, csr: &Csr, betas: &[f64], seed: u64) -> Vec<i8> {
    let n = model.n();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut spins: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let mut field: Vec<f64> = (0..n)
        .map(|i| {
            let range = csr.start[i]..csr.start[i + 1];
            model.h()[i] + range.map(|k| csr.weight[k] * spins[csr.nbr[k]]).sum::<f64>()
        })
        .collect();
    for &beta in betas {
        let minus_two_beta = -2.0 * beta;
        for i in 0..n {
            let x = minus_two_beta * spins[i] * field[i];
            // acceptance below e^-40 is treated as zero
            if x <= 0.0 || (x < 40.0 && metropolis(x, unit(rng.next_u64()))) {
                spins[i] = -spins[i];
                let change = 2.0 * spins[i];
                let (a, b) = (csr.start[i], csr.start[i + 1]);
                for (&j, &w) in csr.nbr[a..b].iter().zip(&csr.weight[a..b]) {
                    field[j] += change * w;
                }
            }
        }
    }
    spins.into_iter().map(|s| if s > 0.0 { 1 } else { -1 }).collect()
}

/// Uniform draw in `[0, 1)` from the top 53 bits.
#[inline]
fn unit(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Independent annealing runs from uniformly random starts, one
/// single-spin-flip Metropolis sweep per ladder rung. Shot `i` is seeded
/// with `derive_seed(seed, i)`, so the result does not depend on threading.
pub fn sa_sample(model: &IsingModel, config: &SamplerConfig) -> Result<SampleSet> {
    config.validate()?;
    let csr = Csr::new(model);
    let betas = config.betas();
    let shots: Vec<(Vec<i8>, f64)> = (0..config.shots as u64)
        .into_par_iter()
        .map(|i| {
            let spins = anneal_shot(model, &csr, &betas, derive_seed(config.seed, i));
            let e = energy_unchecked(model, &spins);
            (spins, e)
        })
        .collect();
    SampleSet::from_shots((0..model.n()).collect(), shots, config.seed)
}

/// I.i.d. draws from the Boltzmann distribution at inverse temperature
/// `beta`, by enumerating all `2^n` states.
pub fn gibbs_sample(model: &IsingModel, beta: f64, shots: usize, seed: u64) -> Result<SampleSet> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(invalid(format!("inverse temperature {beta} must be non-negative and finite")));
    }
    if shots == 0 {
        return Err(invalid("shots must be at least 1"));
    }
    let n = model.n();
    if n > GIBBS_CAP {
        return Err(Error::ResourceLimit(format!("{n} spins exceed the Gibbs enumeration cap of {GIBBS_CAP}")));
    }
    let energies = classical_energies(model, GIBBS_CAP)?;
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut cdf = Vec::with_capacity(energies.len());
    let mut total = 0.0;
    for &e in &energies {
        total += (-beta * (e - e_min)).exp();
        cdf.push(total);
    }
    let mut rng = seeded(seed);
    let draws: Vec<(Vec<i8>, f64)> = (0..shots)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            let k = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            (Assignment::from_index(k as u64, n).into_inner(), energies[k])
        })
        .collect();
    SampleSet::from_shots((0..n).collect(), draws, seed)
}

/// Loads a stored sample set; with a model, every stored energy is checked.
pub fn replay_sample(path: &Path, model: Option<&IsingModel>) -> Result<SampleSet> {
    let ss = read_sample_set(path)?;
    if let Some(m) = model {
        ss.check_energies(m)?;
    }
    Ok(ss)
}

/// [`sa_sample`] as a [`Sampler`]; `shots` and `seed` of the config are ignored.
#[derive(Debug, Clone, Default)]
pub struct Annealer {
    pub config: SamplerConfig,
}

impl Sampler for Annealer {
    fn sample(&self, model: &IsingModel, shots: usize, seed: u64) -> Result<SampleSet> {
        sa_sample(model, &SamplerConfig { shots, seed, ..self.config.clone() })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Gibbs {
    pub beta: f64,
}

impl Sampler for Gibbs {
    fn sample(&self, model: &IsingModel, shots: usize, seed: u64) -> Result<SampleSet> {
        gibbs_sample(model, self.beta, shots, seed)
    }
}

/// Serves a fixed sample set regardless of shots and seed, after checking
/// its energies against the requested model.
#[derive(Debug, Clone)]
pub struct Replay {
    pub set: SampleSet,
}

impl Sampler for Replay {
    fn sample(&self, model: &IsingModel, _shots: usize, _seed: u64) -> Result<SampleSet> {
        self.set.check_energies(model)?;
        Ok(SampleSet::new((0..model.n()).collect(), self.set.samples().to_vec(), self.set.shots(), self.set.seed())?)
    }
}
