//! Shared inputs for the benchmarks.

pub use apsieve_core;

use apsieve_core::tuples::ATuple;

/// The k = 5 tuples that reach the curve stage.
pub fn curve_stage_tuples() -> Vec<ATuple> {
    [[-3, -5, 2, 1, 1], [-2, -5, 3, 1, 1], [2, 5, 2, -1, -1], [-1, -15, -1, -2, 3], [6, 5, 1, 3, 2]]
        .into_iter()
        .map(|a| ATuple::new(a.to_vec()).expect("valid tuple"))
        .collect()
}
