use super::{DiscreteChannel, InputDistribution};
use crate::error::{Error, Result};

/// Decoder parameters: `s`, tilt `a(x)`, and optionally cost tables `c_l`
/// with multipliers `λ` (denominator) and `λ̄` (numerator).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricParams {
    pub s: f64,
    pub a: Vec<f64>,
    pub lambda: Vec<f64>,
    pub lambda_bar: Vec<f64>,
    pub costs: Vec<Vec<f64>>,
}

impl MetricParams {
    /// `(s, a = 0)`, no costs.
    pub fn gmi(s: f64, nx: usize) -> Self {
        Self::tilted(s, vec![0.0; nx])
    }

    pub fn tilted(s: f64, a: Vec<f64>) -> Self {
        Self { s, a, lambda: vec![], lambda_bar: vec![], costs: vec![] }
    }

    pub fn with_costs(s: f64, costs: Vec<Vec<f64>>, lambda: Vec<f64>, lambda_bar: Vec<f64>) -> Self {
        let nx = costs.first().map_or(0, Vec::len);
        Self { s, a: vec![0.0; nx], lambda, lambda_bar, costs }
    }

    pub fn validate(&self, nx: usize) -> Result<()> {
        if !(self.s >= 0.0) || !self.s.is_finite() {
            return Err(Error::InvalidParameter(format!("s = {} must be finite and non-negative", self.s)));
        }
        if self.a.len() != nx {
            return Err(Error::DimensionMismatch(format!("tilt has {} entries, alphabet {nx}", self.a.len())));
        }
        let l = self.costs.len();
        if self.lambda.len() != l || self.lambda_bar.len() != l {
            return Err(Error::DimensionMismatch(format!(
                "{l} costs but {} / {} multipliers",
                self.lambda.len(),
                self.lambda_bar.len()
            )));
        }
        if let Some(c) = self.costs.iter().find(|c| c.len() != nx) {
            return Err(Error::DimensionMismatch(format!("cost table has {} entries, alphabet {nx}", c.len())));
        }
        Ok(())
    }

    /// Same parameters with `a` shifted to zero mean under `q`.
    pub fn centered(mut self, q: &InputDistribution) -> Self {
        let m = q.mean(&self.a);
        self.a.iter_mut().for_each(|v| *v -= m);
        self
    }

    /// `(den, num)` tilts: `a + λᵀ(c − φ)` and `a + λ̄ᵀ(c − φ)`.
    pub(crate) fn tilts(&self, q: &InputDistribution) -> (Vec<f64>, Vec<f64>) {
        let mut den = self.a.clone();
        let mut num = self.a.clone();
        for (l, c) in self.costs.iter().enumerate() {
            let phi = q.mean(c);
            for x in 0..den.len() {
                den[x] += self.lambda[l] * (c[x] - phi);
                num[x] += self.lambda_bar[l] * (c[x] - phi);
            }
        }
        (den, num)
    }
}

/// Dense `|X| x |Y|` table of a density.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    nx: usize,
    ny: usize,
    data: Vec<f64>,
}

impl Table {
    pub(crate) fn from_flat(nx: usize, ny: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), nx * ny);
        Self { nx, ny, data }
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.ny + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.data[x * self.ny..(x + 1) * self.ny]
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    /// Row-major entries.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn ny(&self) -> usize {
        self.ny
    }
}

fn check(params: &MetricParams, q: &InputDistribution, metric: &DiscreteChannel) -> Result<()> {
    metric.check_input(q)?;
    metric.require_positive()?;
    params.validate(q.len())
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!("rho = {rho} outside [0, 1]")));
    }
    Ok(())
}

pub(crate) fn log_sum_exp(it: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = it.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY || m == f64::INFINITY {
        return m;
    }
    m + it.map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// `ln Σ_x Q(x) Ŵ(y|x)^s e^{t(x)}`.
fn log_partition(q: &InputDistribution, metric: &DiscreteChannel, s: f64, tilt: &[f64], y: usize) -> f64 {
    let probs = q.probs();
    log_sum_exp(
        (0..probs.len())
            .filter(|&x| probs[x] > 0.0)
            .map(|x| probs[x].ln() + s * metric.get(x, y).ln() + tilt[x]),
    )
}

/// Mismatched information density `i_{s,a}(x, y)`.
pub fn info_density(
    params: &MetricParams,
    q: &InputDistribution,
    metric: &DiscreteChannel,
    x: usize,
    y: usize,
) -> Result<f64> {
    check(params, q, metric)?;
    if x >= q.len() || y >= metric.num_outputs() {
        return Err(Error::DimensionMismatch(format!("index ({x}, {y}) out of range")));
    }
    let (den, _) = params.tilts(q);
    Ok(params.s * metric.get(x, y).ln() + den[x] - log_partition(q, metric, params.s, &den, y))
}

pub fn info_density_table(params: &MetricParams, q: &InputDistribution, metric: &DiscreteChannel) -> Result<Table> {
    check(params, q, metric)?;
    let (nx, ny) = (metric.num_inputs(), metric.num_outputs());
    let (den, _) = params.tilts(q);
    let part: Vec<f64> = (0..ny).map(|y| log_partition(q, metric, params.s, &den, y)).collect();
    let data = (0..nx)
        .flat_map(|x| (0..ny).map(move |y| (x, y)))
        .map(|(x, y)| params.s * metric.get(x, y).ln() + den[x] - part[y])
        .collect();
    Ok(Table { nx, ny, data })
}

fn log_exponent_table(params: &MetricParams, rho: f64, q: &InputDistribution, metric: &DiscreteChannel) -> Result<Table> {
    check(params, q, metric)?;
    check_rho(rho)?;
    let (nx, ny) = (metric.num_inputs(), metric.num_outputs());
    let (den, num) = params.tilts(q);
    let part: Vec<f64> = (0..ny).map(|y| log_partition(q, metric, params.s, &num, y)).collect();
    let data = (0..nx)
        .flat_map(|x| (0..ny).map(move |y| (x, y)))
        .map(|(x, y)| {
            if rho == 0.0 {
                0.0
            } else {
                rho * (part[y] - params.s * metric.get(x, y).ln() - den[x])
            }
        })
        .collect();
    Ok(Table { nx, ny, data })
}

/// Mismatched exponent density `ε_{s,λ,λ̄,ρ}(x, y)`.
pub fn exponent_density(
    params: &MetricParams,
    rho: f64,
    q: &InputDistribution,
    metric: &DiscreteChannel,
    x: usize,
    y: usize,
) -> Result<f64> {
    if x >= q.len() || y >= metric.num_outputs() {
        return Err(Error::DimensionMismatch(format!("index ({x}, {y}) out of range")));
    }
    Ok(log_exponent_table(params, rho, q, metric)?.get(x, y).exp())
}

pub fn exponent_density_table(
    params: &MetricParams,
    rho: f64,
    q: &InputDistribution,
    metric: &DiscreteChannel,
) -> Result<Table> {
    let mut t = log_exponent_table(params, rho, q, metric)?;
    t.data.iter_mut().for_each(|v| *v = v.exp());
    Ok(t)
}

/// `E_{Q×W}[i_{s,a}]`; with `channel = metric` this is `I^ML_{s,a}`.
pub fn rate_functional(
    params: &MetricParams,
    q: &InputDistribution,
    metric: &DiscreteChannel,
    channel: &DiscreteChannel,
) -> Result<f64> {
    metric.check_same_shape(channel)?;
    let i = info_density_table(params, q, metric)?;
    Ok(expect(q, channel, |x, y| i.get(x, y)))
}

pub(crate) fn expect(q: &InputDistribution, w: &DiscreteChannel, f: impl Fn(usize, usize) -> f64) -> f64 {
    let mut acc = 0.0;
    for (x, &qx) in q.probs().iter().enumerate() {
        if qx > 0.0 {
            let mut row = 0.0;
            for (y, &wy) in w.row(x).iter().enumerate() {
                if wy > 0.0 {
                    row += wy * f(x, y);
                }
            }
            acc += qx * row;
        }
    }
    acc
}

/// `−log E_{Q×W}[ε]`.
pub fn e0_functional(
    params: &MetricParams,
    rho: f64,
    q: &InputDistribution,
    metric: &DiscreteChannel,
    channel: &DiscreteChannel,
) -> Result<f64> {
    metric.check_same_shape(channel)?;
    let le = log_exponent_table(params, rho, q, metric)?;
    if rho == 0.0 {
        return Ok(0.0);
    }
    let probs = q.probs();
    let terms = (0..q.len())
        .filter(|&x| probs[x] > 0.0)
        .flat_map(|x| (0..channel.num_outputs()).map(move |y| (x, y)))
        .filter(|&(x, y)| channel.get(x, y) > 0.0)
        .map(|(x, y)| probs[x].ln() + channel.get(x, y).ln() + le.get(x, y));
    Ok(-log_sum_exp(terms))
}

/// `−E_Q[log E_W[ε | X]]`.
pub fn e0_cc_functional(
    params: &MetricParams,
    rho: f64,
    q: &InputDistribution,
    metric: &DiscreteChannel,
    channel: &DiscreteChannel,
) -> Result<f64> {
    metric.check_same_shape(channel)?;
    let le = log_exponent_table(params, rho, q, metric)?;
    if rho == 0.0 {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for (x, &qx) in q.probs().iter().enumerate() {
        if qx > 0.0 {
            let terms = (0..channel.num_outputs())
                .filter(|&y| channel.get(x, y) > 0.0)
                .map(|y| channel.get(x, y).ln() + le.get(x, y));
            acc -= qx * log_sum_exp(terms);
        }
    }
    Ok(acc)
}
