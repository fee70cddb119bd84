//! Inputs shared by the benchmarks.

use fbwm_core::{Fpcs, Problem};

pub fn example_one() -> Fpcs {
    Fpcs::from_json_str(include_str!("../../../fixtures/example1.json")).expect("valid fixture")
}

pub fn example_two() -> Fpcs {
    Fpcs::from_json_str(include_str!("../../../fixtures/example2.json")).expect("valid fixture")
}

pub fn supply_chain() -> Problem {
    Problem::from_json_str(include_str!("../../../fixtures/supply-chain.json")).expect("valid fixture")
}
