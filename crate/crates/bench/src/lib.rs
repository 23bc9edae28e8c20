//! Benchmark helpers: shared fixtures for the criterion benches.

use lattice_lab_core::{RealFunction, SamplingPlan, Space};

pub fn plane() -> Space {
    Space::euclidean(2).expect("dim 2")
}

pub fn bench_plan(num_pairs: u64) -> SamplingPlan {
    SamplingPlan::uniform(0xBE5C, num_pairs, 10.0)
}

pub fn bench_function(space: &Space) -> RealFunction {
    RealFunction::radial(space, "min(1,|x|)", |r| r.min(1.0))
        .expect("normed space")
        .with_lip(1.0)
        .with_sup(1.0)
}
