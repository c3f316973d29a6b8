//! Finite-alphabet channels, decoding metrics and the fixed-parameter
//! information / exponent functionals.

mod density;
mod distance;
mod gauge;
pub mod io;
mod rates;

pub use density::{
    e0_cc_functional, e0_functional, exponent_density, exponent_density_table, info_density,
    info_density_table, rate_functional, MetricParams, Table,
};
pub use distance::{chi2_cond, kl_cond};
pub(crate) use density::expect;
pub(crate) use rates::{require_converged, sup_over_s};
pub use gauge::TiltCoords;
pub use rates::{gallager_e0_cc, gallager_e0_iid, gmi_rate, lm_rate, mutual_information, RateOptimum};

use crate::error::{Error, Result};

const SUM_TOL: f64 = 1e-12;
/// Metric entries below this are treated as zero.
pub const METRIC_FLOOR: f64 = 1e-300;

/// Input distribution `Q_X`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDistribution {
    probs: Vec<f64>,
}

impl InputDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty alphabet".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("entry {p} is not a probability")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: vec![1.0 / n as f64; n] }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn mean(&self, f: &[f64]) -> f64 {
        self.probs.iter().zip(f).filter(|(q, _)| **q > 0.0).map(|(q, v)| q * v).sum()
    }
}

/// Row-stochastic matrix `W(y|x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteChannel {
    nx: usize,
    ny: usize,
    data: Vec<f64>,
}

impl DiscreteChannel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let nx = rows.len();
        let ny = rows.first().map_or(0, Vec::len);
        if nx == 0 || ny == 0 {
            return Err(Error::DimensionMismatch("channel needs at least one row and column".into()));
        }
        if rows.iter().any(|r| r.len() != ny) {
            return Err(Error::DimensionMismatch("rows have different lengths".into()));
        }
        Self::from_flat(nx, ny, rows.concat())
    }

    pub fn from_flat(nx: usize, ny: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != nx * ny {
            return Err(Error::DimensionMismatch(format!("{} entries for a {nx}x{ny} channel", data.len())));
        }
        for (x, row) in data.chunks(ny).enumerate() {
            if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(Error::InvalidDistribution(format!("row {x} has entry {v}")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > SUM_TOL {
                return Err(Error::InvalidDistribution(format!("row {x} sums to {sum}")));
            }
        }
        Ok(Self { nx, ny, data })
    }

    pub fn from_fn(nx: usize, ny: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let data = (0..nx).flat_map(|x| (0..ny).map(move |y| (x, y))).map(|(x, y)| f(x, y)).collect();
        Self::from_flat(nx, ny, data)
    }

    pub fn num_inputs(&self) -> usize {
        self.nx
    }

    pub fn num_outputs(&self) -> usize {
        self.ny
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.ny + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.data[x * self.ny..(x + 1) * self.ny]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.ny)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// Checks the metric requirement `Ŵ(y|x) > 0`.
    pub fn require_positive(&self) -> Result<()> {
        for x in 0..self.nx {
            for y in 0..self.ny {
                let value = self.get(x, y);
                if value < METRIC_FLOOR {
                    return Err(Error::NonPositiveMetric { x, y, value });
                }
            }
        }
        Ok(())
    }

    pub(crate) fn check_input(&self, q: &InputDistribution) -> Result<()> {
        if q.len() != self.nx {
            return Err(Error::DimensionMismatch(format!(
                "input distribution has {} symbols, channel has {} inputs",
                q.len(),
                self.nx
            )));
        }
        Ok(())
    }

    pub(crate) fn check_same_shape(&self, other: &DiscreteChannel) -> Result<()> {
        if self.nx != other.nx || self.ny != other.ny {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.nx, self.ny, other.nx, other.ny
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BallKind {
    RelativeEntropy,
    ChiSquared,
}

impl BallKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BallKind::RelativeEntropy => "kl",
            BallKind::ChiSquared => "chi2",
        }
    }
}

/// Uncertainty ball around a strictly positive metric.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSpec {
    pub center: DiscreteChannel,
    pub radius: f64,
    pub kind: BallKind,
}

impl BallSpec {
    pub fn new(center: DiscreteChannel, radius: f64, kind: BallKind) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!("ball radius {radius}")));
        }
        center.require_positive()?;
        Ok(Self { center, radius, kind })
    }

    pub fn chi2(center: DiscreteChannel, radius: f64) -> Result<Self> {
        Self::new(center, radius, BallKind::ChiSquared)
    }

    pub fn kl(center: DiscreteChannel, radius: f64) -> Result<Self> {
        Self::new(center, radius, BallKind::RelativeEntropy)
    }
}

/// Random-coding ensemble. For rates `Iid` is the GMI and `ConstantComposition`
/// the LM rate; for exponents the latter means the two-cost form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ensemble {
    Iid,
    ConstantComposition,
}

impl Ensemble {
    pub fn as_str(self) -> &'static str {
        match self {
            Ensemble::Iid => "iid",
            Ensemble::ConstantComposition => "cc",
        }
    }
}

impl std::str::FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "iid" | "gmi" => Ok(Ensemble::Iid),
            "cc" | "cost" | "lm" => Ok(Ensemble::ConstantComposition),
            other => Err(Error::Config(format!("unknown ensemble '{other}'"))),
        }
    }
}
