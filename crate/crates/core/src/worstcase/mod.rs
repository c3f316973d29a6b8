//! Worst-case GMI / LM rates and Gallager functions over a divergence ball
//! around the decoding metric.
//!
//! Two solvers are provided for every quantity: the closed form over the
//! chi-squared ball and an exact reference solver over the relative-entropy
//! ball. Both maximize over decoder parameters the minimum over channels,
//! with the channel minimization innermost.

mod chi2;
mod sphere;

pub use chi2::{
    e0_dispersion, e0_feasibility_radius, feasibility_radius, rate_dispersion, rate_score,
    worst_channel_chi2, worst_e0_channel_chi2,
};

use crate::dmc::{
    exponent_density_table, info_density_table, mutual_information, require_converged, sup_over_s,
    BallKind, BallSpec, DiscreteChannel, Ensemble, InputDistribution, MetricParams, TiltCoords,
};
use crate::error::{Error, Result};
use crate::numerics::{maximize_multid, maximize_unimodal_1d, OptimizerReport, ScalarBracket, Tolerances};
use crate::report::format_real;
use chi2::{chi2_raw, clip_kernel, e0_stats, rate_stats};
use sphere::{minimize_on_kl_sphere, SphereSolution};

#[derive(Debug, Clone, PartialEq)]
pub struct WorstCaseResult {
    pub value: f64,
    pub params: MetricParams,
    /// Set for Gallager-function results.
    pub rho: Option<f64>,
    pub worst_channel: DiscreteChannel,
    /// Distance of the worst channel from the center in the ball's own
    /// divergence.
    pub attained_distance: f64,
    /// Chi-squared feasibility radius at the optimizing parameters.
    pub feasibility_radius: f64,
    pub feasible: bool,
    /// Raw entries of the closed-form kernel that were negative before
    /// clipping (empty when feasible).
    pub negative_entries: Vec<(usize, usize, f64)>,
    pub radius: f64,
    pub kind: BallKind,
    pub ensemble: Ensemble,
    pub diagnostics: Vec<OptimizerReport>,
}

impl WorstCaseResult {
    pub const CSV_HEADER: [&'static str; 7] =
        ["r", "ball_kind", "ensemble", "value", "s_star", "attained_distance", "feasibility_radius"];

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            format_real(self.radius),
            self.kind.as_str().to_string(),
            self.ensemble.as_str().to_string(),
            format_real(self.value),
            format_real(self.params.s),
            format_real(self.attained_distance),
            format_real(self.feasibility_radius),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Solver {
    Chi2,
    ExactKl,
}

impl Solver {
    pub fn as_str(self) -> &'static str {
        match self {
            Solver::Chi2 => "chi2",
            Solver::ExactKl => "exact-kl",
        }
    }

    pub fn ball_kind(self) -> BallKind {
        match self {
            Solver::Chi2 => BallKind::ChiSquared,
            Solver::ExactKl => BallKind::RelativeEntropy,
        }
    }
}

/// Joint maximization of `f` over decoder parameters. `tables` is 1 for
/// rates (the tilt `a`) and 2 for exponents (two cost tables entering the
/// denominator and numerator respectively).
fn maximize_params(
    q: &InputDistribution,
    ensemble: Ensemble,
    tables: usize,
    tol: &Tolerances,
    mut f: impl FnMut(&MetricParams) -> Result<f64>,
) -> Result<(MetricParams, f64, Vec<OptimizerReport>)> {
    let nx = q.len();
    let iid = sup_over_s(|s| f(&MetricParams::gmi(s, nx)), tol)?;
    let s0 = iid.argmax();
    if ensemble == Ensemble::Iid {
        let value = iid.value;
        return Ok((MetricParams::gmi(s0, nx), value, vec![iid]));
    }
    let coords = TiltCoords::new(q);
    let k = coords.dim();
    let build = |v: &[f64]| -> MetricParams {
        if tables == 1 {
            MetricParams::tilted(v[0], coords.expand(&v[1..]))
        } else {
            let c1 = coords.expand(&v[1..1 + k]);
            let c2 = coords.expand(&v[1 + k..1 + 2 * k]);
            MetricParams::with_costs(v[0], vec![c1, c2], vec![1.0, 0.0], vec![0.0, 1.0])
        }
    };
    let mut start = vec![s0];
    start.extend(std::iter::repeat(0.0).take(tables * k));
    let mut bounds = vec![(0.0, f64::INFINITY)];
    bounds.extend(std::iter::repeat((f64::NEG_INFINITY, f64::INFINITY)).take(tables * k));
    let mut first_err = None;
    let report = maximize_multid(
        |v| match f(&build(v)) {
            Ok(x) => x,
            Err(e) => {
                first_err.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        &start,
        &bounds,
        tol,
    );
    if !report.value.is_finite() {
        return Err(first_err.unwrap_or_else(|| Error::OptimizerDidNotConverge(Box::new(report))));
    }
    let report = require_converged(report)?;
    // coordinate ascent never goes below its start, but keep the iid point if
    // round-off says otherwise
    if report.value < iid.value {
        let value = iid.value;
        return Ok((MetricParams::gmi(s0, nx), value, vec![iid, report]));
    }
    Ok((build(&report.point), report.value, vec![iid, report]))
}

/// At `s = 0` every channel ties (the density is constant). The worst
/// channel reported is then the `s → 0⁺` limit, whose direction is already
/// resolved at a tiny positive `s` since both sphere problems ignore the
/// scale of the objective.
const TIE_S: f64 = 1e-6;

fn tie_break(params: &MetricParams) -> MetricParams {
    let mut p = params.clone();
    if p.s == 0.0 {
        p.s = TIE_S;
    }
    p
}

fn check_ball(q: &InputDistribution, ball: &BallSpec, kind: BallKind) -> Result<()> {
    if ball.kind != kind {
        return Err(Error::InvalidParameter(format!(
            "solver expects a {} ball, got {}",
            kind.as_str(),
            ball.kind.as_str()
        )));
    }
    if q.len() != ball.center.num_inputs() {
        return Err(Error::DimensionMismatch(format!(
            "input distribution has {} symbols, metric has {} inputs",
            q.len(),
            ball.center.num_inputs()
        )));
    }
    ball.center.require_positive()
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!("rho = {rho} outside [0, 1]")));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn chi2_result(
    q: &InputDistribution,
    ball: &BallSpec,
    ensemble: Ensemble,
    params: MetricParams,
    value: f64,
    rho: Option<f64>,
    stats: &chi2::Stats,
    sign: f64,
    diagnostics: Vec<OptimizerReport>,
) -> Result<WorstCaseResult> {
    let center = &ball.center;
    let r = ball.radius;
    let radius = if stats.v > 0.0 { stats.radius(q, -sign) } else { f64::INFINITY };
    let kernel = if stats.v > 0.0 {
        stats.kernel(center, r, sign)
    } else {
        center.rows().flatten().copied().collect()
    };
    let attained = chi2_raw(q, center, &kernel);
    let (worst_channel, negative_entries) = clip_kernel(center.num_inputs(), center.num_outputs(), kernel)?;
    Ok(WorstCaseResult {
        value,
        params,
        rho,
        worst_channel,
        attained_distance: attained,
        feasibility_radius: radius,
        feasible: r < radius,
        negative_entries,
        radius: r,
        kind: BallKind::ChiSquared,
        ensemble,
        diagnostics,
    })
}

/// Worst-case GMI (`Iid`) or LM rate (`ConstantComposition`) over a
/// chi-squared ball: `sup { I^ML − √(2rV) }`.
pub fn worst_rate_chi2(q: &InputDistribution, ball: &BallSpec, ensemble: Ensemble) -> Result<WorstCaseResult> {
    worst_rate_chi2_with(q, ball, ensemble, &Tolerances::default())
}

pub fn worst_rate_chi2_with(
    q: &InputDistribution,
    ball: &BallSpec,
    ensemble: Ensemble,
    tol: &Tolerances,
) -> Result<WorstCaseResult> {
    check_ball(q, ball, BallKind::ChiSquared)?;
    let (center, r) = (&ball.center, ball.radius);
    let (params, value, reports) =
        maximize_params(q, ensemble, 1, tol, |p| Ok(rate_stats(p, q, center)?.rate_objective(r)))?;
    let st = rate_stats(&tie_break(&params), q, center)?;
    chi2_result(q, ball, ensemble, params, value, None, &st, -1.0, reports)
}

/// Worst-case Gallager function over a chi-squared ball:
/// `sup { E^ML − log(1 + √(2rV)) }`; `ConstantComposition` searches two cost
/// tables.
pub fn worst_e0_chi2(q: &InputDistribution, ball: &BallSpec, rho: f64, ensemble: Ensemble) -> Result<WorstCaseResult> {
    worst_e0_chi2_with(q, ball, rho, ensemble, &Tolerances::default())
}

pub fn worst_e0_chi2_with(
    q: &InputDistribution,
    ball: &BallSpec,
    rho: f64,
    ensemble: Ensemble,
    tol: &Tolerances,
) -> Result<WorstCaseResult> {
    check_ball(q, ball, BallKind::ChiSquared)?;
    check_rho(rho)?;
    let (center, r) = (&ball.center, ball.radius);
    let (params, value, reports) =
        maximize_params(q, ensemble, 2, tol, |p| Ok(e0_stats(p, rho, q, center)?.e0_objective(r)))?;
    let st = e0_stats(&tie_break(&params), rho, q, center)?;
    chi2_result(q, ball, ensemble, params, value, Some(rho), &st, 1.0, reports)
}

fn rate_inner(params: &MetricParams, q: &InputDistribution, center: &DiscreteChannel, r: f64) -> Result<(f64, SphereSolution)> {
    let i = info_density_table(params, q, center)?;
    let sol = minimize_on_kl_sphere(q, center, i.data(), r)?;
    Ok((sol.value, sol))
}

fn e0_inner(
    params: &MetricParams,
    rho: f64,
    q: &InputDistribution,
    center: &DiscreteChannel,
    r: f64,
) -> Result<(f64, SphereSolution)> {
    let eps = exponent_density_table(params, rho, q, center)?;
    let mean = crate::dmc::expect(q, center, |x, y| eps.get(x, y));
    let g: Vec<f64> = eps.data().iter().map(|e| -e / mean).collect();
    let sol = minimize_on_kl_sphere(q, center, &g, r)?;
    // −log E_W[ε] = −log E_Ŵ[ε] − log(E_W[ε] / E_Ŵ[ε])
    Ok((-mean.ln() - (-sol.value).ln(), sol))
}

#[allow(clippy::too_many_arguments)]
fn exact_result(
    q: &InputDistribution,
    ball: &BallSpec,
    ensemble: Ensemble,
    params: MetricParams,
    value: f64,
    rho: Option<f64>,
    sol: SphereSolution,
    diagnostics: Vec<OptimizerReport>,
) -> Result<WorstCaseResult> {
    let SphereSolution { channel, distance: attained, .. } = sol;
    let radius = match rho {
        None => rate_stats(&tie_break(&params), q, &ball.center)?.radius(q, 1.0),
        Some(rho) => e0_stats(&tie_break(&params), rho, q, &ball.center)?.radius(q, -1.0),
    };
    Ok(WorstCaseResult {
        value,
        params,
        rho,
        worst_channel: channel,
        attained_distance: attained,
        feasibility_radius: radius,
        feasible: true,
        negative_entries: vec![],
        radius: ball.radius,
        kind: BallKind::RelativeEntropy,
        ensemble,
        diagnostics,
    })
}

/// Reference solver over the relative-entropy ball.
pub fn worst_rate_exact_kl(q: &InputDistribution, ball: &BallSpec, ensemble: Ensemble) -> Result<WorstCaseResult> {
    worst_rate_exact_kl_with(q, ball, ensemble, &Tolerances::default())
}

pub fn worst_rate_exact_kl_with(
    q: &InputDistribution,
    ball: &BallSpec,
    ensemble: Ensemble,
    tol: &Tolerances,
) -> Result<WorstCaseResult> {
    check_ball(q, ball, BallKind::RelativeEntropy)?;
    let (center, r) = (&ball.center, ball.radius);
    let (params, value, reports) = maximize_params(q, ensemble, 1, tol, |p| Ok(rate_inner(p, q, center, r)?.0))?;
    let (_, sol) = rate_inner(&tie_break(&params), q, center, r)?;
    exact_result(q, ball, ensemble, params, value, None, sol, reports)
}

pub fn worst_e0_exact_kl(
    q: &InputDistribution,
    ball: &BallSpec,
    rho: f64,
    ensemble: Ensemble,
) -> Result<WorstCaseResult> {
    worst_e0_exact_kl_with(q, ball, rho, ensemble, &Tolerances::default())
}

pub fn worst_e0_exact_kl_with(
    q: &InputDistribution,
    ball: &BallSpec,
    rho: f64,
    ensemble: Ensemble,
    tol: &Tolerances,
) -> Result<WorstCaseResult> {
    check_ball(q, ball, BallKind::RelativeEntropy)?;
    check_rho(rho)?;
    let (center, r) = (&ball.center, ball.radius);
    if rho == 0.0 {
        let params = MetricParams::gmi(0.0, q.len());
        let sol = SphereSolution { channel: center.clone(), value: 0.0, distance: 0.0 };
        return exact_result(q, ball, ensemble, params, 0.0, Some(0.0), sol, vec![]);
    }
    let (params, value, reports) =
        maximize_params(q, ensemble, 2, tol, |p| Ok(e0_inner(p, rho, q, center, r)?.0))?;
    let (_, sol) = e0_inner(&tie_break(&params), rho, q, center, r)?;
    exact_result(q, ball, ensemble, params, value, Some(rho), sol, reports)
}

/// Dispatch on the solver; the ball kind is taken from the solver.
pub fn worst_e0(
    q: &InputDistribution,
    center: &DiscreteChannel,
    r: f64,
    rho: f64,
    ensemble: Ensemble,
    solver: Solver,
    tol: &Tolerances,
) -> Result<WorstCaseResult> {
    let ball = BallSpec::new(center.clone(), r, solver.ball_kind())?;
    match solver {
        Solver::Chi2 => worst_e0_chi2_with(q, &ball, rho, ensemble, tol),
        Solver::ExactKl => worst_e0_exact_kl_with(q, &ball, rho, ensemble, tol),
    }
}

pub fn worst_rate(
    q: &InputDistribution,
    center: &DiscreteChannel,
    r: f64,
    ensemble: Ensemble,
    solver: Solver,
    tol: &Tolerances,
) -> Result<WorstCaseResult> {
    let ball = BallSpec::new(center.clone(), r, solver.ball_kind())?;
    match solver {
        Solver::Chi2 => worst_rate_chi2_with(q, &ball, ensemble, tol),
        Solver::ExactKl => worst_rate_exact_kl_with(q, &ball, ensemble, tol),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentOptimum {
    pub value: f64,
    pub rho: f64,
    pub report: OptimizerReport,
}

/// Worst-case random-coding exponent `max_{ρ ∈ [0,1]} E0(ρ) − ρR`, with
/// `E0` the worst-case Gallager function over the ball.
pub fn worst_exponent(
    q: &InputDistribution,
    ball: &BallSpec,
    rate: f64,
    ensemble: Ensemble,
    solver: Solver,
) -> Result<ExponentOptimum> {
    worst_exponent_with(q, ball, rate, ensemble, solver, &Tolerances::default())
}

pub fn worst_exponent_with(
    q: &InputDistribution,
    ball: &BallSpec,
    rate: f64,
    ensemble: Ensemble,
    solver: Solver,
    tol: &Tolerances,
) -> Result<ExponentOptimum> {
    if !(rate >= 0.0) {
        return Err(Error::InvalidParameter(format!("rate R = {rate} must be non-negative")));
    }
    let mut first_err = None;
    let report = maximize_unimodal_1d(
        |rho| match worst_e0(q, &ball.center, ball.radius, rho, ensemble, solver, tol) {
            Ok(res) => res.value - rho * rate,
            Err(e) => {
                first_err.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        ScalarBracket::new(0.0, 1.0, tol.argument.max(1e-7)),
    );
    if let Some(e) = first_err {
        return Err(e);
    }
    Ok(ExponentOptimum { value: report.value, rho: report.argmax(), report })
}

/// `I_MI(Q, Ŵ) − √(2 r V_{1,0})`, the `s = 1, a = 0` lower bound.
pub fn lower_bound_rate(q: &InputDistribution, metric: &DiscreteChannel, r: f64) -> Result<f64> {
    let st = rate_stats(&MetricParams::gmi(1.0, q.len()), q, metric)?;
    Ok(mutual_information(q, metric)? - (2.0 * r * st.v).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmc::{gallager_e0_iid, rate_functional};

    fn bsc(p: f64) -> DiscreteChannel {
        DiscreteChannel::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]]).unwrap()
    }

    fn ternary() -> (InputDistribution, DiscreteChannel) {
        (
            InputDistribution::new(vec![0.3, 0.3, 0.4]).unwrap(),
            DiscreteChannel::new(vec![
                vec![0.85, 0.05, 0.10],
                vec![0.15, 0.825, 0.025],
                vec![0.025, 0.10, 0.875],
            ])
            .unwrap(),
        )
    }

    #[test]
    fn r_zero_is_mutual_information() {
        let (q, w) = ternary();
        let mi = mutual_information(&q, &w).unwrap();
        for ens in [Ensemble::Iid, Ensemble::ConstantComposition] {
            let res = worst_rate_chi2(&q, &BallSpec::chi2(w.clone(), 0.0).unwrap(), ens).unwrap();
            assert!((res.value - mi).abs() < 1e-12, "{ens:?}");
            assert!((res.params.s - 1.0).abs() < 1e-4);
            assert_eq!(res.worst_channel, w);
        }
    }

    #[test]
    fn bsc_bound_and_feasibility() {
        let q = InputDistribution::uniform(2);
        let w = bsc(0.1);
        let lb = lower_bound_rate(&q, &w, 0.01).unwrap();
        assert!((lb - 0.274_844).abs() < 1e-6);
        let res = worst_rate_chi2(&q, &BallSpec::chi2(w.clone(), 0.01).unwrap(), Ensemble::Iid).unwrap();
        assert!(res.value >= lb - 1e-9);
        assert!(res.feasible);
        // past every radius the best decoder is s = 0 with rate 0
        let far = worst_rate_chi2(&q, &BallSpec::chi2(w, 6.0).unwrap(), Ensemble::Iid).unwrap();
        assert_eq!(far.value, 0.0);
        assert_eq!(far.params.s, 0.0);
    }

    #[test]
    fn exact_solver_lands_on_sphere() {
        let (q, w) = ternary();
        let res = worst_rate_exact_kl(&q, &BallSpec::kl(w.clone(), 0.01).unwrap(), Ensemble::Iid).unwrap();
        assert!((res.attained_distance - 0.01).abs() < 1e-8);
        let check = rate_functional(&res.params, &q, &w, &res.worst_channel).unwrap();
        assert!((check - res.value).abs() < 1e-12);
        let chi = worst_rate_chi2(&q, &BallSpec::chi2(w, 0.01).unwrap(), Ensemble::Iid).unwrap();
        // same √r term; the gap is O(r)
        assert!(chi.value > res.value && chi.value - res.value < 2.0 * 0.01);
    }

    #[test]
    fn exponent_at_zero_radius_is_gallager() {
        let q = InputDistribution::uniform(2);
        let w = bsc(0.1);
        let rho = 1.0;
        let res = worst_e0_chi2(&q, &BallSpec::chi2(w.clone(), 0.0).unwrap(), rho, Ensemble::Iid).unwrap();
        let g = gallager_e0_iid(&q, &w, rho).unwrap();
        assert!((res.value - g).abs() < 1e-10);
        let zero = worst_e0_chi2(&q, &BallSpec::chi2(w, 0.3).unwrap(), 0.0, Ensemble::Iid).unwrap();
        assert!(zero.value.abs() < 1e-15);
    }

    #[test]
    fn exponent_above_capacity_vanishes() {
        let q = InputDistribution::uniform(2);
        let ball = BallSpec::chi2(bsc(0.1), 0.01).unwrap();
        let res = worst_exponent(&q, &ball, 0.5, Ensemble::Iid, Solver::Chi2).unwrap();
        assert_eq!(res.rho, 0.0);
        assert!(res.value.abs() < 1e-15);
    }

    #[test]
    fn wrong_ball_kind_is_rejected() {
        let q = InputDistribution::uniform(2);
        let ball = BallSpec::kl(bsc(0.1), 0.01).unwrap();
        assert!(matches!(worst_rate_chi2(&q, &ball, Ensemble::Iid), Err(Error::InvalidParameter(_))));
    }
}
