//! Exact diagonalization of the transverse-field Hamiltonian
//! `H(s) = a(s)·H_M + b(s)·H_P` along an annealing schedule.
//!
//! Basis state `k` has spin `+1` on qubit `i` when bit `i` of `k` is clear.
//! The mixer is `H_M = −Σ σ^x_i`, whose ground state is the uniform
//! superposition.

mod brute;
mod encoding;
mod schedule;

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::ising::IsingModel;

pub use brute::{brute_force_ground, classical_energies, GroundStates, BRUTE_FORCE_CAP};
pub use encoding::{encode_vertex, min_maintaining_strength, EncodingShape};
pub use schedule::Schedule;

pub const DEFAULT_QUBIT_CAP: usize = 12;
pub const DEFAULT_GRID_POINTS: usize = 201;
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;
pub const QUBIT_CAP_ENV: &str = "CHAINGAUGE_QUBIT_CAP";

/// Qubit cap from `CHAINGAUGE_QUBIT_CAP`, falling back to [`DEFAULT_QUBIT_CAP`].
pub fn qubit_cap_from_env() -> Result<usize> {
    match std::env::var(QUBIT_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| invalid(format!("{QUBIT_CAP_ENV}={v:?} is not a qubit count"))),
        Err(_) => Ok(DEFAULT_QUBIT_CAP),
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::ResourceLimit(format!("{n} qubits exceed the spectral cap of {cap}")));
    }
    Ok(())
}

/// Dense `2^n × 2^n` matrix of `H(s)`.
pub fn build_hamiltonian(model: &IsingModel, s: f64, schedule: &Schedule, cap: usize) -> Result<DMatrix<f64>> {
    check_cap(model.n(), cap)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(invalid(format!("annealing fraction {s} outside [0, 1]")));
    }
    let diag = classical_energies(model, cap)?;
    Ok(assemble(model.n(), &diag, schedule.eval(s)))
}

fn assemble(n: usize, diag: &[f64], (a, b): (f64, f64)) -> DMatrix<f64> {
    let dim = diag.len();
    let mut h = DMatrix::zeros(dim, dim);
    for (k, e) in diag.iter().enumerate() {
        h[(k, k)] = b * e;
        for i in 0..n {
            h[(k, k ^ (1 << i))] = -a;
        }
    }
    h
}

/// Reusable diagonalizer for one model: the classical diagonal is enumerated once.
struct Spectrum<'a> {
    n: usize,
    diag: Vec<f64>,
    schedule: &'a Schedule,
}

impl<'a> Spectrum<'a> {
    fn new(model: &IsingModel, schedule: &'a Schedule, cap: usize) -> Result<Self> {
        check_cap(model.n(), cap)?;
        Ok(Self { n: model.n(), diag: classical_energies(model, cap)?, schedule })
    }

    fn levels(&self, s: f64, k: usize) -> Vec<f64> {
        let h = assemble(self.n, &self.diag, self.schedule.eval(s));
        let mut eig: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        eig.truncate(k);
        eig
    }

    fn gap(&self, s: f64) -> f64 {
        let e = self.levels(s, 2);
        e[1] - e[0]
    }
}

/// Lowest `k` eigenvalues of `H(s)` at each grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    pub s: Vec<f64>,
    pub levels: Vec<Vec<f64>>,
    pub k: usize,
}

impl GapProfile {
    /// `s,E0,E1,...` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s");
        for i in 0..self.k {
            let _ = write!(out, ",E{i}");
        }
        out.push('\n');
        for (s, row) in self.s.iter().zip(&self.levels) {
            let _ = write!(out, "{s}");
            for e in row {
                let _ = write!(out, ",{e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            s: self.s.clone(),
            levels: self.levels.iter().map(|r| r.iter().map(|e| e * c).collect()).collect(),
            k: self.k,
        }
    }
}

/// Evenly spaced grid on `[0, 1]`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points).map(|i| i as f64 / last).collect()
}

pub fn gap_profile(
    model: &IsingModel,
    schedule: &Schedule,
    grid_points: usize,
    k: usize,
    cap: usize,
) -> Result<GapProfile> {
    if grid_points < 2 {
        return Err(invalid("gap profile needs at least 2 grid points"));
    }
    gap_profile_on(model, schedule, &uniform_grid(grid_points), k, cap)
}

/// Profile on an explicit grid of annealing fractions.
pub fn gap_profile_on(model: &IsingModel, schedule: &Schedule, grid: &[f64], k: usize, cap: usize) -> Result<GapProfile> {
    if k == 0 {
        return Err(invalid("at least one level must be tracked"));
    }
    if grid.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(invalid("grid values must lie in [0, 1]"));
    }
    let spec = Spectrum::new(model, schedule, cap)?;
    let k = k.min(spec.diag.len());
    let levels = grid.iter().map(|&s| spec.levels(s, k)).collect();
    Ok(GapProfile { s: grid.to_vec(), levels, k })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinGap {
    pub delta_min: f64,
    pub s_star: f64,
    /// `E1 − E0` vanishes at `s = 1`: the classical ground state is not unique.
    pub degenerate: bool,
    /// Ground-state multiplicity at `s = 1` (within the tolerance).
    pub ground_multiplicity: usize,
    /// Smallest gap between the ground manifold and the next level above it,
    /// with its location; `None` when too few levels were tracked.
    pub manifold_gap: Option<(f64, f64)>,
}

pub fn min_gap(profile: &GapProfile, degeneracy_tol: f64) -> Result<MinGap> {
    if profile.k < 2 || profile.levels.is_empty() {
        return Err(invalid("minimum gap needs at least two tracked levels"));
    }
    let (i_star, delta_min) = profile
        .levels
        .iter()
        .map(|r| r[1] - r[0])
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, g)| if g < best.1 { (i, g) } else { best });

    let last = profile.levels.last().expect("non-empty");
    let ground_multiplicity = last.iter().take_while(|e| **e - last[0] < degeneracy_tol).count();
    let degenerate = ground_multiplicity > 1;
    let manifold_gap = (ground_multiplicity < profile.k).then(|| {
        profile
            .levels
            .iter()
            .zip(&profile.s)
            .map(|(r, &s)| (r[ground_multiplicity] - r[0], s))
            .fold((f64::INFINITY, 0.0), |b, x| if x.0 < b.0 { x } else { b })
    });
    Ok(MinGap { delta_min, s_star: profile.s[i_star], degenerate, ground_multiplicity, manifold_gap })
}

/// Golden-section refinement of `E1 − E0` on the grid cell pair around the grid minimum.
pub fn refine_min_gap(
    model: &IsingModel,
    schedule: &Schedule,
    profile: &GapProfile,
    cap: usize,
    s_tol: f64,
) -> Result<(f64, f64)> {
    let coarse = min_gap(profile, DEFAULT_DEGENERACY_TOL)?;
    let spec = Spectrum::new(model, schedule, cap)?;
    let i = profile.s.iter().position(|&s| s == coarse.s_star).expect("grid point");
    let mut lo = profile.s[i.saturating_sub(1)];
    let mut hi = profile.s[(i + 1).min(profile.s.len() - 1)];
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (spec.gap(x1), spec.gap(x2));
    while hi - lo > s_tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = spec.gap(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = spec.gap(x2);
        }
    }
    let (s, g) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if g < coarse.delta_min {
        Ok((g, s))
    } else {
        Ok((coarse.delta_min, coarse.s_star))
    }
}

/// All weights divided by `alpha`.
pub fn rescale_model(model: &IsingModel, alpha: f64) -> Result<IsingModel> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid(format!("rescaling factor {alpha} must be positive")));
    }
    Ok(model.scaled(1.0 / alpha))
}

/// For the `1/α`-rescaled problem at `s2`, the matching fraction `s1` of the
/// original problem and the factor with `E_i^{1/α}(s2) = factor · E_i(s1)`.
pub fn rescaling_correspondence(s2: f64, alpha: f64) -> (f64, f64) {
    let s1 = s2 / ((alpha - 1.0) * (1.0 - s2) + 1.0);
    let factor = 1.0 + (1.0 / alpha - 1.0) * s2;
    (s1, factor)
}

/// Largest `|E_i^{1/α}(s2) − factor·E_i(s1)|` over a uniform `s2` grid and
/// the lowest `k` levels, with both sides diagonalized directly under the
/// linear schedule (the correspondence is exact only there).
pub fn rescaling_deviation(model: &IsingModel, alpha: f64, grid_points: usize, k: usize, cap: usize) -> Result<f64> {
    let schedule = Schedule::linear();
    let rescaled = gap_profile(&rescale_model(model, alpha)?, &schedule, grid_points, k, cap)?;
    let (s1, factors): (Vec<f64>, Vec<f64>) = rescaled.s.iter().map(|&s2| rescaling_correspondence(s2, alpha)).unzip();
    let original = gap_profile_on(model, &schedule, &s1, k, cap)?;
    let mut worst: f64 = 0.0;
    for ((lhs, rhs), f) in rescaled.levels.iter().zip(&original.levels).zip(&factors) {
        for (a, b) in lhs.iter().zip(rhs) {
            worst = worst.max((a - f * b).abs());
        }
    }
    Ok(worst)
}
