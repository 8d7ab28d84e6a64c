use crate::error::{Error, Result};
use crate::ising::{energy_unchecked, Assignment, IsingModel};

/// Largest problem enumerated exhaustively.
pub const BRUTE_FORCE_CAP: usize = 24;

/// Classical energy of every basis state, indexed as in [`Assignment::from_index`].
pub fn classical_energies(model: &IsingModel, cap: usize) -> Result<Vec<f64>> {
    let n = model.n();
    if n > cap.min(BRUTE_FORCE_CAP) {
        return Err(Error::ResourceLimit(format!("{n} spins exceed the enumeration cap of {}", cap.min(BRUTE_FORCE_CAP))));
    }
    let mut spins = vec![1i8; n];
    Ok((0..1u64 << n)
        .map(|k| {
            for (i, s) in spins.iter_mut().enumerate() {
                *s = if k >> i & 1 == 0 { 1 } else { -1 };
            }
            energy_unchecked(model, &spins)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStates {
    pub energy: f64,
    pub minimizers: Vec<Assignment>,
}

/// Exhaustive minimization returning every minimizer.
///
/// A Gray-code sweep with incremental energy updates shortlists near-minimal
/// states; the shortlist is re-evaluated exactly before ties are decided.
pub fn brute_force_ground(model: &IsingModel) -> Result<GroundStates> {
    let n = model.n();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::ResourceLimit(format!("{n} spins exceed the enumeration cap of {BRUTE_FORCE_CAP}")));
    }
    let scale = 1.0 + model.weight_mass();
    let shortlist_tol = 1e-6 * scale;
    let tie_tol = 1e-10 * scale;

    let adj = model.graph().adjacency();
    let (h, j) = (model.h(), model.j());
    let mut spins = vec![1i8; n];
    let mut index: u64 = 0;
    let mut e = energy_unchecked(model, &spins);
    let mut best = e;
    let mut shortlist: Vec<(u64, f64)> = vec![(0, e)];
    for step in 1..1u64 << n {
        let i = step.trailing_zeros() as usize;
        let field: f64 = h[i] + adj[i].iter().map(|&(u, k)| j[k] * f64::from(spins[u])).sum::<f64>();
        e -= 2.0 * f64::from(spins[i]) * field;
        spins[i] = -spins[i];
        index ^= 1 << i;
        if e <= best + shortlist_tol {
            if e < best {
                best = e;
                shortlist.retain(|&(_, x)| x <= best + shortlist_tol);
            }
            shortlist.push((index, e));
        }
    }

    let exact: Vec<(u64, f64)> = shortlist
        .into_iter()
        .map(|(k, _)| (k, energy_unchecked(model, &Assignment::from_index(k, n))))
        .collect();
    let energy = exact.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    let mut keys: Vec<u64> = exact.iter().filter(|x| x.1 <= energy + tie_tol).map(|x| x.0).collect();
    keys.sort_unstable();
    let minimizers = keys.into_iter().map(|k| Assignment::from_index(k, n)).collect();
    Ok(GroundStates { energy, minimizers })
}
