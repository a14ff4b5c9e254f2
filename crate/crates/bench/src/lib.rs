//! Shared fixtures for the criterion benches.

use medqmc_core::digital_net::{sobol_matrices, DirectionNumbers};
use medqmc_core::median_qmc::RuleSpec;
use medqmc_core::{GenMatrixSet, PrimeField};

pub const SEED: u64 = 42;
pub const W: usize = 52;

pub fn binary() -> PrimeField {
    PrimeField::new(2).expect("2 is prime")
}

pub fn sobol(s: usize, m: usize) -> GenMatrixSet {
    sobol_matrices(s, m, DirectionNumbers::bundled()).expect("bundled table covers the bench sizes")
}

pub fn median_sobol(s: usize, m: usize, r: u32) -> RuleSpec {
    RuleSpec::scrambled_net(sobol(s, m), W, r, SEED).expect("odd r")
}

pub fn median_plr(s: usize, m: usize, r: u32) -> RuleSpec {
    RuleSpec::plr(binary(), m, s, W, r, SEED).expect("odd r")
}

/// ∏ (1 + (x_j − 1/2)) with integral 1.
pub fn product(x: &[f64]) -> f64 {
    x.iter().map(|&v| 0.5 + v).product()
}
