//! Closed forms for symmetric and modulo-additive metrics with equiprobable
//! inputs.
//!
//! For a Gallager-symmetric metric every column sum `Σ_x Ŵ(y|x)^s` is the
//! same, so the information density only depends on `Ŵ(y|x)` itself and the
//! worst-case rate and Gallager function reduce to moments of the first row:
//! `κ_t = Σ_y Ŵ_sym(y)^t`.

use crate::dmc::{sup_over_s, DiscreteChannel, METRIC_FLOOR};
use crate::error::{Error, Result};
use crate::numerics::{OptimizerReport, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMetric {
    first_row: Vec<f64>,
    /// `perms[x][y]` indexes `first_row` for entry `(x, y)`.
    perms: Vec<Vec<usize>>,
}

impl SymmetricMetric {
    /// Cyclic layout `Ŵ(y|x) = Ŵ_sym((y − x) mod n)` on an `n x n` alphabet.
    pub fn cyclic(first_row: Vec<f64>) -> Result<Self> {
        let n = first_row.len();
        let perms = (0..n).map(|x| (0..n).map(|y| (y + n - x) % n).collect()).collect();
        Self::with_permutations(first_row, perms)
    }

    /// Arbitrary layout; every row must be a permutation of `first_row` and
    /// every column a permutation of every other column.
    pub fn with_permutations(first_row: Vec<f64>, perms: Vec<Vec<usize>>) -> Result<Self> {
        let ny = first_row.len();
        if ny == 0 || perms.is_empty() {
            return Err(Error::DimensionMismatch("empty symmetric metric".into()));
        }
        if let Some(v) = first_row.iter().find(|v| !(**v >= METRIC_FLOOR) || !v.is_finite()) {
            return Err(Error::InvalidDistribution(format!("metric entry {v} must be positive")));
        }
        let sum: f64 = first_row.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("first row sums to {sum}")));
        }
        for (x, p) in perms.iter().enumerate() {
            let mut seen = vec![false; ny];
            if p.len() != ny || p.iter().any(|&j| j >= ny || std::mem::replace(&mut seen[j], true)) {
                return Err(Error::InvalidParameter(format!("row {x} is not a permutation of 0..{ny}")));
            }
        }
        let column = |y: usize| {
            let mut c: Vec<usize> = perms.iter().map(|p| p[y]).collect();
            c.sort_unstable();
            c
        };
        let c0 = column(0);
        if let Some(y) = (1..ny).find(|&y| column(y) != c0) {
            return Err(Error::InvalidParameter(format!("column {y} is not a permutation of column 0")));
        }
        Ok(Self { first_row, perms })
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    pub fn num_inputs(&self) -> usize {
        self.perms.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.first_row.len()
    }

    /// Full `|X| x |Y|` matrix.
    pub fn to_channel(&self) -> DiscreteChannel {
        DiscreteChannel::from_fn(self.num_inputs(), self.num_outputs(), |x, y| self.first_row[self.perms[x][y]])
            .expect("validated on construction")
    }

    /// Same layout with a different first row.
    fn relabel(&self, row: Vec<f64>) -> Result<DiscreteChannel> {
        DiscreteChannel::from_fn(self.num_inputs(), self.num_outputs(), |x, y| row[self.perms[x][y]])
    }

    fn entropy(&self) -> f64 {
        -self.first_row.iter().map(|w| w * w.ln()).sum::<f64>()
    }

    fn log_variance(&self) -> f64 {
        let h = self.entropy();
        self.first_row.iter().map(|w| w * (w.ln() + h).powi(2)).sum()
    }
}

/// `p̄ = 1 − (n−1)p` on the diagonal, `p` elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuloAdditiveMetric {
    pub p: f64,
    pub size: usize,
}

impl ModuloAdditiveMetric {
    pub fn new(p: f64, size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidParameter("alphabet needs at least two symbols".into()));
        }
        if !(p >= METRIC_FLOOR && p <= 1.0 / size as f64) {
            return Err(Error::InvalidParameter(format!("crossover {p} outside (0, 1/{size}]")));
        }
        Ok(Self { p, size })
    }

    pub fn p_bar(&self) -> f64 {
        1.0 - (self.size - 1) as f64 * self.p
    }

    pub fn kappa(&self, t: f64) -> f64 {
        let pb = self.p_bar();
        pb.powf(t) + (1.0 - pb) * self.p.powf(t - 1.0)
    }

    pub fn to_symmetric(&self) -> SymmetricMetric {
        let mut row = vec![self.p; self.size];
        row[0] = self.p_bar();
        SymmetricMetric::cyclic(row).expect("valid crossover")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructuredOptimum {
    pub value: f64,
    pub s: f64,
    pub report: OptimizerReport,
}

/// `κ_t = Σ_y Ŵ_sym(y)^t`.
pub fn kappa(metric: &SymmetricMetric, t: f64) -> f64 {
    metric.first_row.iter().map(|w| w.powf(t)).sum()
}

fn rate_objective(ny: usize, kappa_s: f64, s: f64, h: f64, var: f64, r: f64) -> f64 {
    (ny as f64 / kappa_s).ln() - s * h - (2.0 * r * s * s * var).sqrt()
}

/// `κ_{1−2t}/κ²_{1−t} − 1` written as a centered variance; the ratio form
/// cancels catastrophically for small `t`. `points` are `(mass, Ŵ value)`.
fn tilt_dispersion(points: &[(f64, f64)], t: f64) -> f64 {
    let m: f64 = points.iter().map(|(p, w)| p * w.powf(-t)).sum();
    points.iter().map(|(p, w)| p * (w.powf(-t) / m - 1.0).powi(2)).sum()
}

fn e0_objective(ny: usize, k: impl Fn(f64) -> f64, points: &[(f64, f64)], s: f64, rho: f64, r: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    let ml = rho * (ny as f64).ln() - rho * k(s).ln() - k(1.0 - s * rho).ln();
    ml - (2.0 * r * tilt_dispersion(points, s * rho)).sqrt().ln_1p()
}

fn optimum(f: impl FnMut(f64) -> f64) -> Result<StructuredOptimum> {
    let mut f = f;
    let report = sup_over_s(|s| Ok(f(s)), &Tolerances::default())?;
    Ok(StructuredOptimum { value: report.value, s: report.argmax(), report })
}

fn check_radius(r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("ball radius {r}")));
    }
    Ok(())
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!("rho = {rho} outside [0, 1]")));
    }
    Ok(())
}

/// Worst-case GMI over the chi-squared ball with uniform inputs:
/// `sup_s { log(|Y|/κ_s) − sH − s√(2r Var[log Ŵ_sym]) }`.
pub fn symmetric_worst_gmi(metric: &SymmetricMetric, r: f64) -> Result<StructuredOptimum> {
    check_radius(r)?;
    let (ny, h, var) = (metric.num_outputs(), metric.entropy(), metric.log_variance());
    optimum(|s| rate_objective(ny, kappa(metric, s), s, h, var, r))
}

/// Worst-case i.i.d. Gallager function over the chi-squared ball.
pub fn symmetric_worst_e0(metric: &SymmetricMetric, rho: f64, r: f64) -> Result<StructuredOptimum> {
    check_radius(r)?;
    check_rho(rho)?;
    let points: Vec<(f64, f64)> = metric.first_row.iter().map(|&w| (w, w)).collect();
    optimum(|s| e0_objective(metric.num_outputs(), |t| kappa(metric, t), &points, s, rho, r))
}

/// Worst-case channel for the rate problem. It keeps the layout of the
/// metric and does not depend on `s`.
pub fn symmetric_worst_channel(metric: &SymmetricMetric, r: f64) -> Result<DiscreteChannel> {
    check_radius(r)?;
    let (h, var) = (metric.entropy(), metric.log_variance());
    // round-off floor for a uniform row
    if var <= 1e-24 {
        return Err(Error::DegenerateMetric("uniform metric has zero dispersion".into()));
    }
    let scale = (2.0 * r / var).sqrt();
    let row: Vec<f64> = metric.first_row.iter().map(|w| w * (1.0 - scale * (w.ln() + h))).collect();
    if row.iter().any(|v| *v < 0.0) {
        let phi_max = metric.first_row.iter().map(|w| (w.ln() + h) / var.sqrt()).fold(0.0, f64::max);
        return Err(Error::InfeasibleRadius { r, radius: 0.5 / (phi_max * phi_max) });
    }
    metric.relabel(row)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuloAdditiveOptimum {
    pub value: f64,
    pub s: f64,
    /// Off-diagonal crossover of the worst-case modulo-additive channel.
    pub q_worst: f64,
    pub report: OptimizerReport,
}

pub fn modulo_additive_worst_gmi(metric: &ModuloAdditiveMetric, r: f64) -> Result<ModuloAdditiveOptimum> {
    check_radius(r)?;
    let (p, pb) = (metric.p, metric.p_bar());
    let n = metric.size;
    let h = -(pb * pb.ln() + (1.0 - pb) * p.ln());
    let l = (pb / p).ln();
    let var = pb * (1.0 - pb) * l * l;
    let opt = optimum(|s| rate_objective(n, metric.kappa(s), s, h, var, r))?;
    let q_worst = if var > 0.0 { p * (1.0 + (2.0 * r).sqrt() * (pb / (1.0 - pb)).sqrt()) } else { p };
    Ok(ModuloAdditiveOptimum { value: opt.value, s: opt.s, q_worst, report: opt.report })
}

pub fn modulo_additive_worst_e0(metric: &ModuloAdditiveMetric, rho: f64, r: f64) -> Result<StructuredOptimum> {
    check_radius(r)?;
    check_rho(rho)?;
    let (p, pb) = (metric.p, metric.p_bar());
    let points = [(pb, pb), (1.0 - pb, p)];
    optimum(|s| e0_objective(metric.size, |t| metric.kappa(t), &points, s, rho, r))
}
