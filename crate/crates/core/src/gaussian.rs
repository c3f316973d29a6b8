//! Gaussian codebooks with nearest-neighbor decoding.
//!
//! Inputs are `N(0, P)` and the metric is `Ŵ(y|x) = N(y − x − μ̂; σ̂²)`, so
//! every closed form depends on `Γ = P/σ̂²` only. The additive-noise part
//! works with the noise density directly.

use crate::error::{Error, Result};
use crate::numerics::{
    find_root, integrate_1d, maximize_halfline, maximize_multid, maximize_unimodal_1d, OptimizerReport,
    ScalarBracket, Tolerances,
};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSetup {
    pub power: f64,
    pub sigma_hat2: f64,
    pub mu_hat: f64,
}

impl GaussianSetup {
    pub fn new(power: f64, sigma_hat2: f64, mu_hat: f64) -> Result<Self> {
        if !(power > 0.0 && power.is_finite()) || !(sigma_hat2 > 0.0 && sigma_hat2.is_finite()) || !mu_hat.is_finite() {
            return Err(Error::InvalidParameter(format!("P = {power}, σ̂² = {sigma_hat2}, μ̂ = {mu_hat}")));
        }
        Ok(Self { power, sigma_hat2, mu_hat })
    }

    /// Unit-variance metric with SNR `gamma`.
    pub fn with_snr(gamma: f64) -> Result<Self> {
        Self::new(gamma, 1.0, 0.0)
    }

    pub fn gamma(&self) -> f64 {
        self.power / self.sigma_hat2
    }

    /// Integration half-width `10 max(σ̂, √(P + σ̂²))`.
    pub fn truncation(&self) -> f64 {
        10.0 * self.sigma_hat2.sqrt().max((self.power + self.sigma_hat2).sqrt())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianOptimum {
    pub value: f64,
    pub s: f64,
    /// Power-cost multiplier in units of `1/σ̂²` (zero for the GMI).
    pub lambda: f64,
    pub report: OptimizerReport,
}

fn check_radius(r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("ball radius {r}")));
    }
    Ok(())
}

/// `I^ML` with power cost, `g = 1 − 2λΓ`; `g = 1` is the GMI.
fn cost_ml(gamma: f64, s: f64, g: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    0.5 * (g + s * gamma).ln() + (gamma * (1.0 - s) + g * (1.0 - g) / s) / (2.0 * (gamma + g / s))
}

fn cost_dispersion(gamma: f64, s: f64, g: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    gamma * (2.0 * g * g + s * s * gamma) / (2.0 * (g / s + gamma).powi(2))
}

fn lambda_to_g(setup: &GaussianSetup, lambda: f64) -> Result<f64> {
    let g = 1.0 - 2.0 * lambda * setup.gamma();
    if !(g > 0.0) {
        return Err(Error::OutsideValidity(format!("1 − 2λΓ = {g} must be positive")));
    }
    Ok(g)
}

/// Generalized information `I^ML_{s,λ}` for the power cost `c(x) = x²`.
pub fn rate_ml_gaussian(setup: &GaussianSetup, s: f64, lambda: f64) -> Result<f64> {
    Ok(cost_ml(setup.gamma(), s, lambda_to_g(setup, lambda)?))
}

/// Information-density dispersion `V_{s,λ}` for the power cost.
pub fn rate_dispersion_gaussian(setup: &GaussianSetup, s: f64, lambda: f64) -> Result<f64> {
    Ok(cost_dispersion(setup.gamma(), s, lambda_to_g(setup, lambda)?))
}

/// `sup_s { I^ML_s − √(2 r V_s) }`.
pub fn gmi_worst_gaussian(setup: &GaussianSetup, r: f64) -> Result<GaussianOptimum> {
    check_radius(r)?;
    let gamma = setup.gamma();
    let report = maximize_halfline(
        |s| cost_ml(gamma, s, 1.0) - (2.0 * r * cost_dispersion(gamma, s, 1.0)).sqrt(),
        ScalarBracket::new(0.0, 32.0, Tolerances::default().argument),
    );
    let report = converged(report)?;
    Ok(GaussianOptimum { value: report.value, s: report.argmax(), lambda: 0.0, report })
}

/// The `s = 1` approximation `½log(1+Γ) − √(rΓ(2+Γ)/(1+Γ)²)`.
pub fn gmi_approx_gaussian(setup: &GaussianSetup, r: f64) -> Result<f64> {
    check_radius(r)?;
    let g = setup.gamma();
    Ok(0.5 * g.ln_1p() - (r * g * (2.0 + g) / (1.0 + g).powi(2)).sqrt())
}

/// Worst-case cost-constrained rate: sup over `s ≥ 0` and `λ ≥ 0` with
/// `1 − 2λΓ > 0`.
pub fn cost_worst_gaussian(setup: &GaussianSetup, r: f64) -> Result<GaussianOptimum> {
    let gmi = gmi_worst_gaussian(setup, r)?;
    let gamma = setup.gamma();
    let f = |v: &[f64]| {
        let (s, g) = (v[0], v[1]);
        if !(g > 0.0) {
            return f64::NEG_INFINITY;
        }
        cost_ml(gamma, s, g) - (2.0 * r * cost_dispersion(gamma, s, g)).sqrt()
    };
    let report = maximize_multid(
        f,
        &[gmi.s, 1.0],
        &[(0.0, f64::INFINITY), (1e-12, 1.0)],
        &Tolerances::default().with_value(1e-14),
    );
    let report = converged(report)?;
    if report.value <= gmi.value {
        return Ok(gmi);
    }
    let g = report.point[1];
    Ok(GaussianOptimum { value: report.value, s: report.point[0], lambda: (1.0 - g) / (2.0 * gamma), report })
}

fn converged(report: OptimizerReport) -> Result<OptimizerReport> {
    if report.converged && report.value.is_finite() {
        Ok(report)
    } else {
        Err(Error::OptimizerDidNotConverge(Box::new(report)))
    }
}

fn check_exponent_args(s: f64, rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!("rho = {rho} outside [0, 1]")));
    }
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::InvalidParameter(format!("s = {s} must be non-negative")));
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::OutsideValidity(format!("{name} = {v}")))
    }
}

/// `E^ML_{s,ρ} = (ρ/2) log(1+Γs) + ½ log(1 + ρΓ(1−s−ρs)/(Γ+1/s))`.
pub fn e0_ml_gaussian(setup: &GaussianSetup, s: f64, rho: f64) -> Result<f64> {
    check_exponent_args(s, rho)?;
    if s == 0.0 || rho == 0.0 {
        return Ok(0.0);
    }
    let g = setup.gamma();
    let inner = positive("1 + ρΓ(1−s−ρs)/(Γ+1/s)", 1.0 + rho * g * (1.0 - s - rho * s) / (g + 1.0 / s))?;
    Ok(0.5 * rho * (g * s).ln_1p() + 0.5 * inner.ln())
}

/// `E[ε²] / E[ε]²` for the normalized exponent density.
pub fn v1_gaussian(setup: &GaussianSetup, s: f64, rho: f64) -> Result<f64> {
    check_exponent_args(s, rho)?;
    if s == 0.0 || rho == 0.0 {
        return Ok(1.0);
    }
    let g = setup.gamma();
    let a = g + 1.0 / s;
    let num = positive("Γ + 1/s + ρΓ(1−s−ρs)", a + rho * g * (1.0 - s - rho * s))?;
    let den = positive("Γ + 1/s + 2ρΓ(1−s−2ρs)", a + 2.0 * rho * g * (1.0 - s - 2.0 * rho * s))?;
    Ok(num / (a.sqrt() * den.sqrt()))
}

/// `E_Q[E²[ε|X]] / E[ε]²`.
pub fn v2_gaussian(setup: &GaussianSetup, s: f64, rho: f64) -> Result<f64> {
    check_exponent_args(s, rho)?;
    if s == 0.0 || rho == 0.0 {
        return Ok(1.0);
    }
    let gs = setup.gamma() * s;
    let num = positive("1 + Γs + ρΓs(1−s−ρs)", 1.0 + gs + rho * gs * (1.0 - s - rho * s))?;
    let d1 = positive("1 + Γs(1−sρ)", 1.0 + gs * (1.0 - s * rho))?;
    let d2 = positive("1 + Γs(1−sρ)(1+2ρ)", 1.0 + gs * (1.0 - s * rho) * (1.0 + 2.0 * rho))?;
    Ok(num / (d1 * d2).sqrt())
}

/// `V_{s,ρ} = V₁ − V₂`.
pub fn v_gaussian(setup: &GaussianSetup, s: f64, rho: f64) -> Result<f64> {
    // the E0 display is needed for the expectations to exist
    e0_ml_gaussian(setup, s, rho)?;
    Ok(v1_gaussian(setup, s, rho)? - v2_gaussian(setup, s, rho)?)
}

/// `sup_s { E^ML_{s,ρ} − log(1 + √(2 r V_{s,ρ})) }`.
pub fn e0_worst_gaussian(setup: &GaussianSetup, rho: f64, r: f64) -> Result<GaussianOptimum> {
    check_radius(r)?;
    check_exponent_args(0.0, rho)?;
    let report = maximize_halfline(
        |s| match (e0_ml_gaussian(setup, s, rho), v_gaussian(setup, s, rho)) {
            (Ok(e), Ok(v)) => e - (2.0 * r * v.max(0.0)).sqrt().ln_1p(),
            _ => f64::NEG_INFINITY,
        },
        ScalarBracket::new(0.0, 32.0, Tolerances::default().argument),
    );
    let report = converged(report)?;
    Ok(GaussianOptimum { value: report.value, s: report.argmax(), lambda: 0.0, report })
}

/// `½ log(1 + Γ/(1 + 2√r))`, the worst second moment `σ̂²(1+2√r)` plugged
/// into the nearest-neighbor rate for additive noise.
pub fn gauss_additive_worst(setup: &GaussianSetup, r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(0.5 * (setup.gamma() / (1.0 + 2.0 * r.sqrt())).ln_1p())
}

/// Same value with a mean-cancelling cost: the worst variance, not second
/// moment, enters the rate, and the two worst cases coincide.
pub fn fixed_cost_worst(setup: &GaussianSetup, r: f64) -> Result<f64> {
    check_radius(r)?;
    let var = worst_noise_chi2(setup, r)?.second_moment;
    Ok(additive_rate(setup, var))
}

/// First-order expansion `½log(1+Γ) − Γ√r/(1+Γ)`.
pub fn gauss_additive_expansion(setup: &GaussianSetup, r: f64) -> Result<f64> {
    check_radius(r)?;
    let g = setup.gamma();
    Ok(0.5 * g.ln_1p() - g * r.sqrt() / (1.0 + g))
}

/// `½ log(1 + P/m₂)`.
pub fn additive_rate(setup: &GaussianSetup, second_moment: f64) -> f64 {
    0.5 * (setup.power / second_moment).ln_1p()
}

fn std_normal(u: f64) -> f64 {
    (-0.5 * u * u).exp() / SQRT_2PI
}

/// `P(|U| ≥ z)` for standard normal `U`.
fn two_sided_tail(z: f64) -> f64 {
    libm::erfc(z / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseShape {
    /// The center `N(μ̂, σ̂²)`.
    Gaussian,
    /// `Ŵ(1 + √r (u² − 1))` in standardized `u = (z−μ̂)/σ̂`.
    Chi2 { sqrt_r: f64 },
    /// `Ŵ` outside `|u| < u₀`, `Ŵ ρ/(u² − λ)` inside (standardized units),
    /// with `λ = (u₀ + δ)²`. `δ` is kept exactly: it is far below the
    /// resolution of `λ` itself.
    BrokenExtremal { u0: f64, delta: f64, rho: f64 },
}

/// Additive noise density around the metric `N(μ̂, σ̂²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseDensity {
    pub mu_hat: f64,
    pub sigma_hat2: f64,
    pub shape: NoiseShape,
    /// `E[(Z − μ̂)²]`.
    pub second_moment: f64,
    /// `D(Ŵ ‖ W)`.
    pub kl_from_center: f64,
    /// False when the chi-squared kernel dips below zero.
    pub nonnegative: bool,
    /// Broken extremal only: mass of the modified region minus one. The
    /// total mass is 1 by construction; this measures how far the
    /// region-mass-one normalization would be.
    pub region_mass_residual: Option<f64>,
    half_width: f64,
}

impl NoiseDensity {
    fn sigma(&self) -> f64 {
        self.sigma_hat2.sqrt()
    }

    pub fn density(&self, z: f64) -> f64 {
        let sigma = self.sigma();
        let u = (z - self.mu_hat) / sigma;
        std_normal(u) / sigma * self.kernel(u)
    }

    /// Discontinuity points `μ̂ ± z₀` of a broken extremal.
    pub fn jump_points(&self) -> Option<(f64, f64)> {
        match self.shape {
            NoiseShape::BrokenExtremal { u0, .. } => {
                let z0 = u0 * self.sigma();
                Some((self.mu_hat - z0, self.mu_hat + z0))
            }
            _ => None,
        }
    }

    /// Boundary `z₀` in noise units.
    pub fn z0(&self) -> Option<f64> {
        self.jump_points().map(|(_, hi)| hi - self.mu_hat)
    }

    /// `λ` in squared noise units.
    pub fn lambda(&self) -> Option<f64> {
        match self.shape {
            NoiseShape::BrokenExtremal { u0, delta, .. } => Some((u0 + delta).powi(2) * self.sigma_hat2),
            _ => None,
        }
    }

    /// `ρ` such that `W = Ŵ ρ/((z−μ̂)² − λ)` inside.
    pub fn rho(&self) -> Option<f64> {
        match self.shape {
            NoiseShape::BrokenExtremal { rho, .. } => Some(rho * self.sigma_hat2),
            _ => None,
        }
    }

    /// Left and right limits at `μ̂ + z₀`.
    pub fn jump(&self) -> Option<(f64, f64)> {
        let NoiseShape::BrokenExtremal { u0, delta, rho } = self.shape else { return None };
        let base = std_normal(u0) / self.sigma();
        Some((base * rho / (-delta * (2.0 * u0 + delta)), base))
    }

    /// `(z, W(z))` on a caller grid.
    pub fn sample(&self, grid: &[f64]) -> Vec<(f64, f64)> {
        grid.iter().map(|&z| (z, self.density(z))).collect()
    }

    /// `∫ f(z) W(z) dz` by adaptive quadrature over the truncation domain.
    /// The modified region of a broken extremal is integrated in the
    /// distance `w = a − |u|` to the pole so the near-singular edge at
    /// `a = √λ` keeps full relative precision.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64, tol: f64) -> Result<f64> {
        let sigma = self.sigma();
        let h = self.half_width;
        let plain = |f: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64| -> Result<f64> {
            Ok(integrate_1d(|u| f(self.mu_hat + sigma * u) * std_normal(u) * self.kernel(u), lo, hi, tol)?.value)
        };
        let NoiseShape::BrokenExtremal { u0, delta, rho } = self.shape else {
            return Ok(plain(&mut f, -h, 0.0)? + plain(&mut f, 0.0, h)?);
        };
        let mut total = plain(&mut f, -h, -u0)? + plain(&mut f, u0, h)?;
        let a = u0 + delta;
        let mut pts = vec![delta];
        while pts[pts.len() - 1] * 10.0 < a {
            let next = pts[pts.len() - 1] * 10.0;
            pts.push(next);
        }
        pts.push(a);
        for sign in [-1.0, 1.0] {
            for win in pts.windows(2) {
                let g = |w: f64| {
                    let u = u0 - (w - delta);
                    f(self.mu_hat + sigma * sign * u) * std_normal(u) * rho / (-w * (2.0 * a - w))
                };
                total += integrate_1d(g, win[0], win[1], tol)?.value;
            }
        }
        Ok(total)
    }

    /// `W / Ŵ` in standardized units.
    fn kernel(&self, u: f64) -> f64 {
        match self.shape {
            NoiseShape::Gaussian => 1.0,
            NoiseShape::Chi2 { sqrt_r } => 1.0 + sqrt_r * (u * u - 1.0),
            NoiseShape::BrokenExtremal { u0, delta, rho } => {
                if u.abs() >= u0 {
                    1.0
                } else {
                    let w = (u0 - u.abs()) + delta;
                    rho / (-w * (2.0 * (u0 + delta) - w))
                }
            }
        }
    }

    pub fn mass(&self) -> Result<f64> {
        self.integrate(|_| 1.0, 1e-12)
    }

    pub fn second_moment_quadrature(&self) -> Result<f64> {
        self.integrate(|z| (z - self.mu_hat).powi(2), 1e-12)
    }
}

fn centered(setup: &GaussianSetup, shape: NoiseShape, second_moment: f64, kl: f64) -> NoiseDensity {
    NoiseDensity {
        mu_hat: setup.mu_hat,
        sigma_hat2: setup.sigma_hat2,
        shape,
        second_moment,
        kl_from_center: kl,
        nonnegative: true,
        region_mass_residual: None,
        half_width: setup.truncation() / setup.sigma_hat2.sqrt(),
    }
}

/// Chi-squared worst case `Ŵ(z)(1 + √r((z−μ̂)² − σ̂²)/σ̂²)`, second moment
/// `σ̂²(1 + 2√r)`.
pub fn worst_noise_chi2(setup: &GaussianSetup, r: f64) -> Result<NoiseDensity> {
    check_radius(r)?;
    if r == 0.0 {
        return Ok(centered(setup, NoiseShape::Gaussian, setup.sigma_hat2, 0.0));
    }
    let sqrt_r = r.sqrt();
    let mut d = centered(setup, NoiseShape::Chi2 { sqrt_r }, setup.sigma_hat2 * (1.0 + 2.0 * sqrt_r), 0.0);
    // kernel minimum 1 − √r at the center
    d.nonnegative = sqrt_r <= 1.0;
    d.kl_from_center = if sqrt_r < 1.0 {
        let h = d.half_width;
        -integrate_1d(|u| std_normal(u) * (sqrt_r * (u * u - 1.0)).ln_1p(), -h, h, 1e-13)?.value
    } else {
        f64::INFINITY
    };
    Ok(d)
}

/// Broken extremal at a fixed boundary, standardized units.
#[derive(Debug, Clone, Copy)]
struct Extremal {
    u0: f64,
    delta: f64,
    rho: f64,
    kl: f64,
    m2: f64,
    inner_mass: f64,
}

/// Solve the normalization in closed form (`ρ J = P(|U| < u₀)`) for
/// `λ = (u₀ + δ)²`; the `1/(u − a)` and `log(a − u)` singularities are
/// subtracted analytically so tiny `δ` stays accurate.
fn extremal_at(u0: f64, delta: f64) -> Result<Extremal> {
    let a = u0 + delta;
    let lambda = a * a;
    let inner_mass = 1.0 - two_sided_tail(u0);
    let f = |u: f64| std_normal(u) / (u + a);
    let fa = f(a);
    let tol = 1e-13;
    let j_reg = integrate_1d(|u| (f(u) - fa) / (u - a), 0.0, u0, tol)?.value;
    let j = 2.0 * (j_reg + fa * (delta / a).ln());
    let rho = inner_mass / j;
    let p0 = std_normal(u0);
    let log_minus = integrate_1d(|u| (std_normal(u) - p0) * (a - u).ln(), 0.0, u0, tol)?.value
        + p0 * (a * a.ln() - a - delta * delta.ln() + delta);
    let log_plus = integrate_1d(|u| std_normal(u) * (a + u).ln(), 0.0, u0, tol)?.value;
    let kl = 2.0 * (log_minus + log_plus) - inner_mass * (-rho).ln();
    let outer_m2 = 2.0 * u0 * p0 + two_sided_tail(u0);
    let m2 = outer_m2 + inner_mass * (rho + lambda);
    Ok(Extremal { u0, delta, rho, kl, m2, inner_mass })
}

/// Smallest `δ/u₀` tried; below this `λ − u₀²` is not resolved.
const MIN_REL_DELTA: f64 = 1e-12;

/// Extremal with `D(Ŵ‖W) = r` at boundary `u₀`, if reachable.
fn extremal_on_sphere(u0: f64, r: f64) -> Result<Option<Extremal>> {
    let residual = |t: f64| extremal_at(u0, u0 * t.exp()).map(|e| e.kl - r);
    let lo = MIN_REL_DELTA.ln();
    if residual(lo)? < 0.0 {
        return Ok(None);
    }
    let mut hi = 0.0;
    while residual(hi)? > 0.0 {
        hi += 2.0;
        if hi > 60.0 {
            return Ok(None);
        }
    }
    let mut err = None;
    let t = find_root(
        |t| match residual(t) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        },
        ScalarBracket::new(lo, hi, 1e-12 * r.max(1e-6)),
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(Some(extremal_at(u0, u0 * t?.exp())?))
}

/// Worst additive noise over the relative-entropy ball `D(Ŵ‖W) ≤ r`: the
/// broken extremal maximizing `E[(Z−μ̂)²]` over the boundary `z₀`.
pub fn worst_noise_kl(setup: &GaussianSetup, r: f64) -> Result<NoiseDensity> {
    check_radius(r)?;
    if r == 0.0 {
        return Ok(centered(setup, NoiseShape::Gaussian, setup.sigma_hat2, 0.0));
    }
    let grid: Vec<f64> = (0..60).map(|k| 0.1 * 60f64.powf(k as f64 / 59.0)).collect();
    let m2_at = |u0: f64| -> f64 {
        match extremal_on_sphere(u0, r) {
            Ok(Some(e)) => e.m2,
            _ => f64::NEG_INFINITY,
        }
    };
    let values: Vec<f64> = grid.iter().map(|&u| m2_at(u)).collect();
    let (k, best) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc });
    if !best.is_finite() {
        return Err(Error::NoBrokenExtremal(format!("radius {r} not reachable for any z0 in [0.1, 6]σ̂")));
    }
    let lo = grid[k.saturating_sub(1)];
    let hi = grid[(k + 1).min(grid.len() - 1)];
    let refined = maximize_unimodal_1d(m2_at, ScalarBracket::new(lo, hi, 1e-9 * hi));
    let u0 = if refined.value >= best { refined.argmax() } else { grid[k] };
    let e = extremal_on_sphere(u0, r)?
        .ok_or_else(|| Error::NoBrokenExtremal(format!("refined boundary {u0} lost the radius")))?;
    let mut d = centered(
        setup,
        NoiseShape::BrokenExtremal { u0: e.u0, delta: e.delta, rho: e.rho },
        e.m2 * setup.sigma_hat2,
        e.kl,
    );
    d.region_mass_residual = Some(e.inner_mass - 1.0);
    Ok(d)
}
