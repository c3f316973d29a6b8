//! Hand-rolled scalar numerics: bracketed maximization, coordinate ascent,
//! Brent root finding and adaptive Gauss-Kronrod quadrature.

mod optimize;
mod quadrature;
mod root;

pub use optimize::{line_maximize, maximize_halfline, maximize_multid, maximize_unimodal_1d};
pub use quadrature::{integrate_1d, integrate_2d_gaussian_weighted, GaussianWeight, Quadrature};
pub use root::find_root;

/// Interval plus the width (for maximizers) or residual (for root finders)
/// at which to stop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarBracket {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl ScalarBracket {
    pub fn new(lo: f64, hi: f64, tol: f64) -> Self {
        Self { lo, hi, tol }
    }
}

/// Tolerances shared by the solvers. `value` stops coordinate ascent,
/// `argument` is the final bracket width of line searches, `root` is the
/// residual accepted by root finders and `quadrature` the absolute/relative
/// quadrature target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub value: f64,
    pub argument: f64,
    pub root: f64,
    pub quadrature: f64,
    pub max_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            value: 1e-8,
            argument: 1e-9,
            root: 1e-10,
            quadrature: 1e-8,
            max_sweeps: 400,
        }
    }
}

impl Tolerances {
    /// Same tolerances with the value tolerance replaced.
    pub fn with_value(mut self, value: f64) -> Self {
        self.value = value;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerReport {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Largest observed departure from unimodality among sampled points, if
    /// any exceeded round-off. Reported, never fatal.
    pub unimodality_violation: Option<f64>,
}

impl OptimizerReport {
    pub fn argmax(&self) -> f64 {
        self.point[0]
    }
}
