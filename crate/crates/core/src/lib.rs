//! Chain-strength analysis for minor-embedded Ising problems: instance
//! generation, Chimera topologies, embeddings and their break metrics,
//! analytic bounds, exact spectral gaps, samplers and the break-rate tuner.

pub mod bounds;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod io;
pub mod ising;
pub mod rng;
pub mod sampler;
pub mod samples;
pub mod spectral;
pub mod topology;
pub mod tuner;

pub use error::{Error, Result};
