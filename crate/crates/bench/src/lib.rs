//! Shared fixtures for the benchmarks.

use btn_core::{gen_random_set, InstanceSpec, VectorSet};

/// `(n, D)` pairs the benches sweep over.
pub const SIZES: [(usize, usize); 3] = [(256, 16), (1024, 32), (3072, 24)];

pub fn instance(n: usize, dim: usize) -> VectorSet {
    gen_random_set(&InstanceSpec::uniform(n, dim, 0xbe7c)).expect("valid instance parameters")
}
