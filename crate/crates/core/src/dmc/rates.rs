use super::density::{e0_cc_functional, rate_functional, MetricParams};
use super::{DiscreteChannel, InputDistribution, TiltCoords};
use crate::error::{Error, Result};
use crate::numerics::{maximize_halfline, maximize_multid, OptimizerReport, ScalarBracket, Tolerances};

/// Initial upper end of the `s` bracket; doubled while the objective still
/// increases there.
pub const S_BRACKET_HI: f64 = 32.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RateOptimum {
    pub value: f64,
    pub params: MetricParams,
    pub report: OptimizerReport,
}

pub(crate) fn require_converged(report: OptimizerReport) -> Result<OptimizerReport> {
    if report.converged {
        Ok(report)
    } else {
        Err(Error::OptimizerDidNotConverge(Box::new(report)))
    }
}

/// Maximize `f(s)` over `s >= 0`, mapping evaluation errors to `-inf`.
pub(crate) fn sup_over_s(mut f: impl FnMut(f64) -> Result<f64>, tol: &Tolerances) -> Result<OptimizerReport> {
    let mut first_err = None;
    let report = maximize_halfline(
        |s| match f(s) {
            Ok(v) => v,
            Err(e) => {
                first_err.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        ScalarBracket::new(0.0, S_BRACKET_HI, tol.argument),
    );
    if !report.value.is_finite() {
        return Err(first_err.unwrap_or_else(|| Error::OptimizerDidNotConverge(Box::new(report))));
    }
    require_converged(report)
}

/// Generalized mutual information: `sup_s rate_functional` with `a = 0`.
pub fn gmi_rate(q: &InputDistribution, metric: &DiscreteChannel, channel: &DiscreteChannel) -> Result<RateOptimum> {
    metric.check_same_shape(channel)?;
    let nx = q.len();
    let tol = Tolerances::default();
    let report = sup_over_s(|s| rate_functional(&MetricParams::gmi(s, nx), q, metric, channel), &tol)?;
    Ok(RateOptimum { value: report.value, params: MetricParams::gmi(report.argmax(), nx), report })
}

/// LM rate: `sup_{s, a} rate_functional`, started from the GMI optimum.
pub fn lm_rate(q: &InputDistribution, metric: &DiscreteChannel, channel: &DiscreteChannel) -> Result<RateOptimum> {
    let gmi = gmi_rate(q, metric, channel)?;
    let coords = TiltCoords::new(q);
    let mut start = vec![gmi.params.s];
    start.extend(std::iter::repeat(0.0).take(coords.dim()));
    let mut bounds = vec![(0.0, f64::INFINITY)];
    bounds.extend(std::iter::repeat((f64::NEG_INFINITY, f64::INFINITY)).take(coords.dim()));
    let eval = |v: &[f64]| MetricParams::tilted(v[0], coords.expand(&v[1..]));
    let report = maximize_multid(
        |v| rate_functional(&eval(v), q, metric, channel).unwrap_or(f64::NEG_INFINITY),
        &start,
        &bounds,
        &Tolerances::default().with_value(1e-12),
    );
    let report = require_converged(report)?;
    Ok(RateOptimum { value: report.value, params: eval(&report.point), report })
}

/// `I(Q, W) = Σ Q W log(W / QW)`.
pub fn mutual_information(q: &InputDistribution, w: &DiscreteChannel) -> Result<f64> {
    w.check_input(q)?;
    let probs = q.probs();
    let out: Vec<f64> = (0..w.num_outputs())
        .map(|y| (0..q.len()).map(|x| probs[x] * w.get(x, y)).sum())
        .collect();
    Ok(super::density::expect(q, w, |x, y| (w.get(x, y) / out[y]).ln()))
}

/// Matched i.i.d. Gallager function `−log Σ_y (Σ_x Q W^{1/(1+ρ)})^{1+ρ}`.
pub fn gallager_e0_iid(q: &InputDistribution, w: &DiscreteChannel, rho: f64) -> Result<f64> {
    w.check_input(q)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!("rho = {rho} outside [0, 1]")));
    }
    let probs = q.probs();
    let total: f64 = (0..w.num_outputs())
        .map(|y| {
            let inner: f64 = (0..q.len()).map(|x| probs[x] * w.get(x, y).powf(1.0 / (1.0 + rho))).sum();
            inner.powf(1.0 + rho)
        })
        .sum();
    Ok(-total.ln())
}

/// Matched constant-composition Gallager function: `sup_{s, a}` of the
/// per-input-log form with metric = channel.
pub fn gallager_e0_cc(q: &InputDistribution, w: &DiscreteChannel, rho: f64) -> Result<RateOptimum> {
    let coords = TiltCoords::new(q);
    let mut start = vec![1.0 / (1.0 + rho)];
    start.extend(std::iter::repeat(0.0).take(coords.dim()));
    let mut bounds = vec![(0.0, f64::INFINITY)];
    bounds.extend(std::iter::repeat((f64::NEG_INFINITY, f64::INFINITY)).take(coords.dim()));
    let eval = |v: &[f64]| MetricParams::tilted(v[0], coords.expand(&v[1..]));
    // surface argument errors before optimizing
    e0_cc_functional(&eval(&start), rho, q, w, w)?;
    let report = maximize_multid(
        |v| e0_cc_functional(&eval(v), rho, q, w, w).unwrap_or(f64::NEG_INFINITY),
        &start,
        &bounds,
        &Tolerances::default().with_value(1e-13),
    );
    let report = require_converged(report)?;
    Ok(RateOptimum { value: report.value, params: eval(&report.point), report })
}
