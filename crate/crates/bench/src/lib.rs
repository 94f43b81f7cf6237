//! Shared fixtures for the criterion benchmarks.

use stochpath_core::generator::{generate, Family, GenSpec};
use stochpath_core::graph::Instance;

/// Deterministic grid instance for benchmarking.
pub fn grid(width: usize, family: Family, seed: u64) -> Instance {
    generate(&GenSpec {
        width,
        family,
        seed,
        eps: 1e-4,
    })
    .expect("generator parameters are valid")
    .instance
}
