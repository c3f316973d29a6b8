//! Closed-form worst cases over the chi-squared ball.

use crate::dmc::{
    exponent_density_table, info_density_table, DiscreteChannel, InputDistribution, MetricParams, Table,
};
use crate::error::{Error, Result};

/// First two moments of a density under `Q × Ŵ`, plus its standardized score.
#[derive(Debug, Clone)]
pub(crate) struct Stats {
    /// `I^ML` (rates) or `E^ML` (exponents).
    pub ml: f64,
    /// `E_Q[Var_Ŵ[· | X]]`, normalized by `E[ε]²` for exponents.
    pub v: f64,
    /// Deviation from the conditional mean divided by `√v`; zero on rows
    /// with `Q(x) = 0`.
    pub phi: Vec<f64>,
    nx: usize,
    ny: usize,
}

fn moments(q: &InputDistribution, metric: &DiscreteChannel, f: &Table) -> (f64, f64, Vec<f64>) {
    let (nx, ny) = (metric.num_inputs(), metric.num_outputs());
    let probs = q.probs();
    let mut mean = 0.0;
    let mut v = 0.0;
    let mut dev = vec![0.0; nx * ny];
    for x in 0..nx {
        if probs[x] == 0.0 {
            continue;
        }
        let w = metric.row(x);
        let row = f.row(x);
        let m: f64 = w.iter().zip(row).map(|(w, f)| w * f).sum();
        let mut var = 0.0;
        for y in 0..ny {
            let d = row[y] - m;
            dev[x * ny + y] = d;
            var += w[y] * d * d;
        }
        mean += probs[x] * m;
        v += probs[x] * var;
    }
    (mean, v, dev)
}

fn standardize(dev: &mut [f64], v: f64) {
    let sd = v.sqrt();
    dev.iter_mut().for_each(|d| *d = if sd > 0.0 { *d / sd } else { 0.0 });
}

pub(crate) fn rate_stats(params: &MetricParams, q: &InputDistribution, metric: &DiscreteChannel) -> Result<Stats> {
    let i = info_density_table(params, q, metric)?;
    let (ml, v, mut phi) = moments(q, metric, &i);
    standardize(&mut phi, v);
    Ok(Stats { ml, v, phi, nx: metric.num_inputs(), ny: metric.num_outputs() })
}

pub(crate) fn e0_stats(params: &MetricParams, rho: f64, q: &InputDistribution, metric: &DiscreteChannel) -> Result<Stats> {
    let eps = exponent_density_table(params, rho, q, metric)?;
    let (e, v, mut phi) = moments(q, metric, &eps);
    let v = v / (e * e);
    phi.iter_mut().for_each(|d| *d /= e);
    standardize(&mut phi, v);
    Ok(Stats { ml: -e.ln(), v, phi, nx: metric.num_inputs(), ny: metric.num_outputs() })
}

impl Stats {
    /// `I^ML − √(2rV)`.
    pub fn rate_objective(&self, r: f64) -> f64 {
        self.ml - (2.0 * r * self.v).sqrt()
    }

    /// `E^ML − log(1 + √(2rV))`.
    pub fn e0_objective(&self, r: f64) -> f64 {
        self.ml - (2.0 * r * self.v).sqrt().ln_1p()
    }

    pub fn score(&self) -> Table {
        Table::from_flat(self.nx, self.ny, self.phi.clone())
    }

    /// `min over {sign·φ > 0, Q(x) > 0}` of `1/(2φ²)`; infinite if empty.
    pub fn radius(&self, q: &InputDistribution, sign: f64) -> f64 {
        let mut best = f64::INFINITY;
        for (x, &qx) in q.probs().iter().enumerate() {
            if qx == 0.0 {
                continue;
            }
            for &p in &self.phi[x * self.ny..(x + 1) * self.ny] {
                if sign * p > 0.0 {
                    best = best.min(0.5 / (p * p));
                }
            }
        }
        best
    }

    /// Raw kernel `Ŵ(1 + sign·√(2r)·φ)`; rows with `Q(x) = 0` stay at `Ŵ`.
    pub fn kernel(&self, metric: &DiscreteChannel, r: f64, sign: f64) -> Vec<f64> {
        let k = sign * (2.0 * r).sqrt();
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for x in 0..self.nx {
            for y in 0..self.ny {
                out.push(metric.get(x, y) * (1.0 + k * self.phi[x * self.ny + y]));
            }
        }
        out
    }
}

/// Clip negative entries and renormalize. Returns the channel and the
/// offending raw entries.
pub(crate) fn clip_kernel(nx: usize, ny: usize, mut raw: Vec<f64>) -> Result<(DiscreteChannel, Vec<(usize, usize, f64)>)> {
    let mut negative = Vec::new();
    for x in 0..nx {
        let row = &mut raw[x * ny..(x + 1) * ny];
        for (y, v) in row.iter_mut().enumerate() {
            if *v < 0.0 {
                negative.push((x, y, *v));
                *v = 0.0;
            }
        }
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= s);
    }
    Ok((DiscreteChannel::from_flat(nx, ny, raw)?, negative))
}

/// `½ Σ Q (k − Ŵ)² / Ŵ` for a possibly signed kernel.
pub(crate) fn chi2_raw(q: &InputDistribution, metric: &DiscreteChannel, kernel: &[f64]) -> f64 {
    let ny = metric.num_outputs();
    let mut acc = 0.0;
    for (x, &qx) in q.probs().iter().enumerate() {
        if qx > 0.0 {
            let row: f64 = (0..ny)
                .map(|y| {
                    let w = metric.get(x, y);
                    let d = kernel[x * ny + y] - w;
                    d * d / w
                })
                .sum();
            acc += qx * row;
        }
    }
    0.5 * acc
}

/// `V_{s,a} = E_Q[Var_Ŵ[i_{s,a} | X]]`.
pub fn rate_dispersion(params: &MetricParams, q: &InputDistribution, metric: &DiscreteChannel) -> Result<f64> {
    Ok(rate_stats(params, q, metric)?.v)
}

/// Standardized information density `φ_{s,a}`.
pub fn rate_score(params: &MetricParams, q: &InputDistribution, metric: &DiscreteChannel) -> Result<Table> {
    Ok(rate_stats(params, q, metric)?.score())
}

/// `V = E_Q[Var_Ŵ[ε | X]] / E[ε]²`.
pub fn e0_dispersion(params: &MetricParams, rho: f64, q: &InputDistribution, metric: &DiscreteChannel) -> Result<f64> {
    Ok(e0_stats(params, rho, q, metric)?.v)
}

/// Largest radius for which the rate worst-case kernel stays nonnegative.
pub fn feasibility_radius(q: &InputDistribution, metric: &DiscreteChannel, params: &MetricParams) -> Result<f64> {
    let st = rate_stats(params, q, metric)?;
    if st.v <= 0.0 {
        return Err(Error::DegenerateMetric("V_{s,a} = 0, the information density is constant".into()));
    }
    Ok(st.radius(q, 1.0))
}

/// Exponent analogue of [`feasibility_radius`].
pub fn e0_feasibility_radius(
    q: &InputDistribution,
    metric: &DiscreteChannel,
    params: &MetricParams,
    rho: f64,
) -> Result<f64> {
    let st = e0_stats(params, rho, q, metric)?;
    if st.v <= 0.0 {
        return Err(Error::DegenerateMetric("V = 0, the exponent density is constant".into()));
    }
    Ok(st.radius(q, -1.0))
}

fn build_channel(q: &InputDistribution, metric: &DiscreteChannel, st: &Stats, r: f64, sign: f64) -> Result<DiscreteChannel> {
    if r == 0.0 {
        return Ok(metric.clone());
    }
    if st.v <= 0.0 {
        return Err(Error::DegenerateMetric("no direction decreases the objective".into()));
    }
    let radius = st.radius(q, -sign);
    if r >= radius {
        return Err(Error::InfeasibleRadius { r, radius });
    }
    DiscreteChannel::from_flat(metric.num_inputs(), metric.num_outputs(), st.kernel(metric, r, sign))
}

/// `W̃*(y|x) = Ŵ(y|x)(1 − √(2r) φ_{s,a}(x, y))`.
pub fn worst_channel_chi2(
    q: &InputDistribution,
    metric: &DiscreteChannel,
    r: f64,
    params: &MetricParams,
) -> Result<DiscreteChannel> {
    let st = rate_stats(params, q, metric)?;
    build_channel(q, metric, &st, r, -1.0)
}

/// Worst channel for the Gallager function at fixed parameters:
/// `Ŵ(1 + √(2r) φ)` with `φ` the standardized exponent density.
pub fn worst_e0_channel_chi2(
    q: &InputDistribution,
    metric: &DiscreteChannel,
    r: f64,
    params: &MetricParams,
    rho: f64,
) -> Result<DiscreteChannel> {
    let st = e0_stats(params, rho, q, metric)?;
    build_channel(q, metric, &st, r, 1.0)
}
