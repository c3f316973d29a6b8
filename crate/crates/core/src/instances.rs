//! Built-in instances used by the sweeps, examples and tests.

use crate::dmc::{DiscreteChannel, InputDistribution};

/// Ternary rate instance: `Q = (0.3, 0.3, 0.4)` and a strongly diagonal
/// metric.
pub fn ternary_rate() -> (InputDistribution, DiscreteChannel) {
    (
        InputDistribution::new(vec![0.3, 0.3, 0.4]).expect("valid"),
        DiscreteChannel::new(vec![
            vec![0.85, 0.05, 0.10],
            vec![0.15, 0.825, 0.025],
            vec![0.025, 0.10, 0.875],
        ])
        .expect("valid"),
    )
}

/// Ternary exponent instance, evaluated at `ρ = 0.7` in the reference sweep.
pub fn ternary_exponent() -> (InputDistribution, DiscreteChannel) {
    (
        InputDistribution::new(vec![0.3, 0.3, 0.4]).expect("valid"),
        DiscreteChannel::new(vec![
            vec![0.85, 0.05, 0.10],
            vec![0.025, 0.945, 0.03],
            vec![0.025, 0.10, 0.875],
        ])
        .expect("valid"),
    )
}

pub const TERNARY_EXPONENT_RHO: f64 = 0.7;

pub fn bsc(p: f64) -> DiscreteChannel {
    DiscreteChannel::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]]).expect("crossover in [0, 1]")
}
