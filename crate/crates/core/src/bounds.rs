//! Closed-form chain strength prescriptions. Every function returns a
//! magnitude; the sign is applied when the chain couplers are built.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::ising::{coupling_rms, IsingModel};

/// Default prefactor of the torque-compensation formula.
pub const TORQUE_PREFACTOR: f64 = 1.414;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub method: String,
    pub magnitude: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_node: Option<BTreeMap<usize, f64>>,
}

/// `|h_v| + Σ_{u ∈ nbr(v)} |J_uv|`: any chain magnitude strictly above it
/// keeps every ground state of chain `v` intact.
pub fn choi_bound_node(model: &IsingModel, v: usize) -> Result<f64> {
    if v >= model.n() {
        return Err(invalid(format!("vertex {v} not in model with {} vertices", model.n())));
    }
    let incident: f64 = model
        .couplings()
        .filter(|((a, b), _)| *a == v || *b == v)
        .map(|(_, w)| w.abs())
        .sum();
    Ok(model.h()[v].abs() + incident)
}

/// Per-node Choi bounds and their maximum, the magnitude sufficient for every chain.
pub fn choi_bound_global(model: &IsingModel) -> Result<BoundResult> {
    if model.n() == 0 {
        return Err(invalid("model has no vertices"));
    }
    let per_node: Vec<f64> = (0..model.n()).map(|v| choi_bound_node(model, v)).collect::<Result<_>>()?;
    let magnitude = per_node.iter().copied().fold(0.0, f64::max);
    Ok(BoundResult {
        method: "choi".into(),
        magnitude,
        per_node: Some(per_node.into_iter().enumerate().collect()),
    })
}

/// `prefactor · √d̄ · RMS(J)` with `d̄ = 2|E|/|V|`.
pub fn torque_compensation(model: &IsingModel, prefactor: f64) -> Result<f64> {
    let rms = coupling_rms(model)?;
    Ok(prefactor * model.graph().average_degree().sqrt() * rms)
}

/// `λ0 · √(σ² N)` with `σ² = 2 Σ J² / (N (N − 1))`.
pub fn raymond_lambda(model: &IsingModel, lambda0: f64) -> Result<f64> {
    let n = model.n();
    if n < 2 {
        return Err(invalid("raymond lambda needs at least two vertices"));
    }
    let nf = n as f64;
    let sq: f64 = model.j().iter().map(|w| w * w).sum();
    let variance = 2.0 * sq / (nf * (nf - 1.0));
    Ok(lambda0 * (variance * nf).sqrt())
}
