//! Minimizing a linear functional over the conditional KL sphere.
//!
//! For `min Σ Q W g` subject to `D(Ŵ‖W|Q) = r`, stationarity gives
//! `W(y|x) = Ŵ(y|x) / (e^{v_x} + τ (g(x,y) − min_y g(x,·)))`, one
//! normalization root `v_x` per row and an outer root in `τ` for the radius.

use crate::dmc::{DiscreteChannel, InputDistribution};
use crate::error::{Error, Result};
use crate::numerics::{find_root, ScalarBracket};

#[derive(Debug, Clone)]
pub(crate) struct SphereSolution {
    pub channel: DiscreteChannel,
    /// `Σ Q W g` at the returned channel.
    pub value: f64,
    pub distance: f64,
}

struct Row<'a> {
    w: &'a [f64],
    d: Vec<f64>,
    lo: f64,
}

impl<'a> Row<'a> {
    fn new(w: &'a [f64], g: &[f64]) -> Self {
        let (amin, gmin) = g
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (y, &v)| if v < acc.1 { (y, v) } else { acc });
        let d = g.iter().map(|v| v - gmin).collect();
        Self { w, d, lo: w[amin].ln() }
    }

    fn is_flat(&self) -> bool {
        self.d.iter().all(|&v| v == 0.0)
    }

    fn mass(&self, v: f64, tau: f64) -> f64 {
        let ev = v.exp();
        self.w.iter().zip(&self.d).map(|(w, d)| w / (ev + tau * d)).sum()
    }

    /// Normalizing `v` for a given `τ`.
    fn solve(&self, tau: f64, x: usize) -> Result<f64> {
        if self.is_flat() || tau == 0.0 {
            return Ok(0.0);
        }
        find_root(|v| self.mass(v, tau) - 1.0, ScalarBracket::new(self.lo, 0.0, 1e-15))
            .map_err(|e| Error::RootBracketFailure(format!("row {x}, tau {tau}: {e}")))
    }

    /// `Σ_y Ŵ log(Ŵ / W)` at the normalized solution.
    fn kl(&self, v: f64, tau: f64) -> f64 {
        let em1 = v.exp_m1();
        self.w.iter().zip(&self.d).map(|(w, d)| w * (em1 + tau * d).ln_1p()).sum()
    }

    fn channel_row(&self, v: f64, tau: f64) -> impl Iterator<Item = f64> + '_ {
        let ev = v.exp();
        self.w.iter().zip(&self.d).map(move |(w, d)| w / (ev + tau * d))
    }
}

/// Minimize `Σ Q W g` over `{W : D(Ŵ‖W|Q) = r}`. `g` is row-major
/// `|X| x |Y|`. Rows with `Q(x) = 0` are left at `Ŵ`.
pub(crate) fn minimize_on_kl_sphere(
    q: &InputDistribution,
    center: &DiscreteChannel,
    g: &[f64],
    r: f64,
) -> Result<SphereSolution> {
    let (nx, ny) = (center.num_inputs(), center.num_outputs());
    let probs = q.probs();
    let rows: Vec<Option<Row>> = (0..nx)
        .map(|x| (probs[x] > 0.0).then(|| Row::new(center.row(x), &g[x * ny..(x + 1) * ny])))
        .collect();
    let assemble = |tau: f64, vs: &[f64]| -> Result<SphereSolution> {
        let mut data = Vec::with_capacity(nx * ny);
        let mut value = 0.0;
        let mut distance = 0.0;
        for x in 0..nx {
            match &rows[x] {
                Some(row) => {
                    let start = data.len();
                    data.extend(row.channel_row(vs[x], tau));
                    let rv: f64 = data[start..].iter().zip(&g[x * ny..(x + 1) * ny]).map(|(w, g)| w * g).sum();
                    value += probs[x] * rv;
                    distance += probs[x] * row.kl(vs[x], tau);
                }
                None => data.extend_from_slice(center.row(x)),
            }
        }
        Ok(SphereSolution { channel: DiscreteChannel::from_flat(nx, ny, data)?, value, distance })
    };
    if r == 0.0 || rows.iter().flatten().all(Row::is_flat) {
        return assemble(0.0, &vec![0.0; nx]);
    }
    let solve_all = |tau: f64| -> Result<(Vec<f64>, f64)> {
        let mut vs = vec![0.0; nx];
        let mut kl = 0.0;
        for (x, row) in rows.iter().enumerate() {
            if let Some(row) = row {
                vs[x] = row.solve(tau, x)?;
                kl += probs[x] * row.kl(vs[x], tau);
            }
        }
        Ok((vs, kl))
    };
    // second-order guess τ ≈ √(2r / Var g)
    let var: f64 = rows
        .iter()
        .enumerate()
        .filter_map(|(x, row)| row.as_ref().map(|row| (x, row)))
        .map(|(x, row)| {
            let m: f64 = row.w.iter().zip(&row.d).map(|(w, d)| w * d).sum();
            probs[x] * row.w.iter().zip(&row.d).map(|(w, d)| w * (d - m) * (d - m)).sum::<f64>()
        })
        .sum();
    let guess = (2.0 * r / var).sqrt().ln();
    let residual = |u: f64| solve_all(u.exp()).map(|(_, kl)| kl - r);
    let (mut lo, mut hi) = (guess - 0.5, guess + 0.5);
    let mut steps = 0;
    while residual(lo)? > 0.0 {
        lo -= 1.0;
        steps += 1;
        if steps > 200 {
            return Err(Error::RootBracketFailure("KL radius: lower multiplier not found".into()));
        }
    }
    while residual(hi)? < 0.0 {
        hi += 1.0;
        steps += 1;
        if steps > 200 {
            return Err(Error::RootBracketFailure(format!("KL radius {r} not reachable")));
        }
    }
    let mut inner_err = None;
    let u = find_root(
        |u| match residual(u) {
            Ok(v) => v,
            Err(e) => {
                inner_err.get_or_insert(e);
                f64::NAN
            }
        },
        ScalarBracket::new(lo, hi, 1e-13 * r.max(1e-3)),
    );
    if let Some(e) = inner_err {
        return Err(e);
    }
    let tau = u?.exp();
    let (vs, _) = solve_all(tau)?;
    assemble(tau, &vs)
}
