//! Deterministic inputs shared by the benchmarks.

use graphon_ldp::{sample_er, SimpleGraph, StepGraphon};

/// Equal-weight `k`-block graphon with values from a fixed linear congruential
/// sequence.
pub fn fixture_graphon(k: usize, seed: u64) -> StepGraphon {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut values = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let v = next();
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    StepGraphon::uniform(values).expect("values lie in [0, 1]")
}

pub fn fixture_graph(n: usize, p: f64) -> SimpleGraph {
    sample_er(n, p, 17).expect("valid parameters")
}
