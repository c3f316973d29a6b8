//! Radius sweeps behind the `mismatch-sweep` binary.
//!
//! Every command turns a [`SweepConfig`] into a [`Table`]: one block of rows
//! per radius, computed on a bounded rayon pool and emitted in `r` order.
//! Solver failures are recorded in an `error` column instead of aborting the
//! sweep.

mod config;

use std::io::Write;

use rayon::prelude::*;

pub use config::{parse_grid, parse_key_values, Instance, Method, SweepConfig};

use crate::dmc::{gallager_e0_cc, gallager_e0_iid, mutual_information, BallSpec, Ensemble};
use crate::error::{Error, Result};
use crate::gaussian::{
    additive_rate, cost_worst_gaussian, fixed_cost_worst, gauss_additive_worst, gmi_approx_gaussian,
    gmi_worst_gaussian, worst_noise_chi2, worst_noise_kl, NoiseDensity,
};
use crate::report::format_real;
use crate::worstcase::{lower_bound_rate, worst_e0, worst_exponent_with, worst_rate, Solver};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Rates,
    Exponents,
    Gaussian,
    WorstNoise,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Rows with a non-empty `error` column.
    pub failures: usize,
}

impl Table {
    fn new(header: &[&'static str], blocks: Vec<Vec<Vec<String>>>) -> Self {
        let rows: Vec<Vec<String>> = blocks.into_iter().flatten().collect();
        debug_assert!(rows.iter().all(|r| r.len() == header.len()));
        let err = header.iter().position(|h| *h == "error");
        let failures = err.map_or(0, |i| rows.iter().filter(|r| !r[i].is_empty()).count());
        Self { header: header.to_vec(), rows, failures }
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn exit_code(&self) -> i32 {
        if self.failures > 0 {
            EXIT_SOLVER
        } else {
            EXIT_OK
        }
    }
}

fn real(x: f64) -> String {
    format_real(x)
}

fn opt(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

fn blank(n: usize) -> impl Iterator<Item = String> {
    std::iter::repeat(String::new()).take(n)
}

fn pool(config: &SweepConfig) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = config.jobs {
        b = b.num_threads(j);
    }
    b.build().map_err(|e| Error::Config(format!("worker pool: {e}")))
}

/// Map over the r grid in parallel, keeping grid order.
fn per_radius<F>(config: &SweepConfig, f: F) -> Result<Vec<Vec<Vec<String>>>>
where
    F: Fn(f64) -> Vec<Vec<String>> + Sync,
{
    let pool = pool(config)?;
    Ok(pool.install(|| config.r_grid.par_iter().map(|&r| f(r)).collect()))
}

pub fn run(command: Command, config: &SweepConfig) -> Result<Table> {
    match command {
        Command::Rates => cmd_rates(config),
        Command::Exponents => cmd_exponents(config),
        Command::Gaussian => cmd_gaussian(config),
        Command::WorstNoise => cmd_worst_noise(config),
    }
}

fn solver_of(method: Method) -> Option<Solver> {
    match method {
        Method::Chi2 => Some(Solver::Chi2),
        Method::ExactKl => Some(Solver::ExactKl),
        Method::Bounds => None,
    }
}

pub const RATES_HEADER: [&str; 11] = [
    "r",
    "method",
    "ensemble",
    "value",
    "s_star",
    "feasible",
    "feasibility_radius",
    "attained_distance",
    "i_mi",
    "worst_channel_mi",
    "error",
];

/// Worst-case GMI / LM rates per radius, method and ensemble. `bounds` is
/// the `s = 1` lower bound and is reported once, under `iid`.
pub fn cmd_rates(config: &SweepConfig) -> Result<Table> {
    let (q, w) = config.instance.discrete()?;
    w.require_positive().map_err(|e| Error::Config(e.to_string()))?;
    let i_mi = mutual_information(&q, &w)?;
    let blocks = per_radius(config, |r| {
        let mut rows = Vec::new();
        for &method in &config.methods {
            let Some(solver) = solver_of(method) else {
                let mut row = vec![real(r), method.as_str().into(), Ensemble::Iid.as_str().into()];
                match lower_bound_rate(&q, &w, r) {
                    Ok(v) => row.extend([real(v), real(1.0)].into_iter().chain(blank(3))),
                    Err(_) => row.extend(blank(5)),
                }
                row.extend([real(i_mi), String::new()]);
                row.push(lower_bound_rate(&q, &w, r).err().map(|e| e.to_string()).unwrap_or_default());
                rows.push(row);
                continue;
            };
            for &ens in &config.ensembles {
                let mut row = vec![real(r), method.as_str().into(), ens.as_str().into()];
                match worst_rate(&q, &w, r, ens, solver, &config.tol) {
                    Ok(res) => {
                        let mi = if config.worst_mi { mutual_information(&q, &res.worst_channel).ok() } else { None };
                        row.extend([
                            real(res.value),
                            real(res.params.s),
                            res.feasible.to_string(),
                            real(res.feasibility_radius),
                            real(res.attained_distance),
                            real(i_mi),
                            opt(mi),
                            String::new(),
                        ]);
                    }
                    Err(e) => {
                        row.extend(blank(5));
                        row.extend([real(i_mi), String::new(), e.to_string()]);
                    }
                }
                rows.push(row);
            }
        }
        rows
    })?;
    Ok(Table::new(&RATES_HEADER, blocks))
}

pub const EXPONENTS_HEADER: [&str; 11] = [
    "r",
    "method",
    "ensemble",
    "rho",
    "e0",
    "s_star",
    "feasible",
    "e0_matched",
    "exponent",
    "rho_star",
    "error",
];

/// Worst-case Gallager functions at `rho`; with `rate` set, also the
/// worst-case exponent `max_ρ E0(ρ) − ρR`.
pub fn cmd_exponents(config: &SweepConfig) -> Result<Table> {
    let (q, w) = config.instance.discrete()?;
    w.require_positive().map_err(|e| Error::Config(e.to_string()))?;
    let rho = config.rho;
    let matched_iid = gallager_e0_iid(&q, &w, rho)?;
    let matched_cc = gallager_e0_cc(&q, &w, rho)?.value;
    let blocks = per_radius(config, |r| {
        let mut rows = Vec::new();
        for solver in config.methods.iter().filter_map(|m| solver_of(*m)) {
            for &ens in &config.ensembles {
                let matched = if ens == Ensemble::Iid { matched_iid } else { matched_cc };
                let mut row = vec![real(r), solver.as_str().into(), ens.as_str().into(), real(rho)];
                let e0 = worst_e0(&q, &w, r, rho, ens, solver, &config.tol);
                let exponent = config.rate.map(|rate| {
                    BallSpec::new(w.clone(), r, solver.ball_kind())
                        .and_then(|ball| worst_exponent_with(&q, &ball, rate, ens, solver, &config.tol))
                });
                let mut error = String::new();
                match &e0 {
                    Ok(res) => row.extend([real(res.value), real(res.params.s), res.feasible.to_string()]),
                    Err(e) => {
                        row.extend(blank(3));
                        error = e.to_string();
                    }
                }
                row.push(real(matched));
                match exponent {
                    Some(Ok(x)) => row.extend([real(x.value), real(x.rho)]),
                    Some(Err(e)) => {
                        row.extend(blank(2));
                        if error.is_empty() {
                            error = e.to_string();
                        }
                    }
                    None => row.extend(blank(2)),
                }
                row.push(error);
                rows.push(row);
            }
        }
        rows
    })?;
    Ok(Table::new(&EXPONENTS_HEADER, blocks))
}

pub const GAUSSIAN_HEADER: [&str; 11] = [
    "r",
    "i_gmi_worst",
    "s_gmi",
    "i_gmi_approx",
    "i_cost",
    "lambda_cost",
    "i_gauss_additive",
    "i_fixed_cost",
    "i_additive_exact",
    "m2_exact",
    "error",
];

/// Worst-case rates for Gaussian codebooks and nearest-neighbor decoding.
/// The exact additive column needs `exact-kl` among the solvers.
pub fn cmd_gaussian(config: &SweepConfig) -> Result<Table> {
    let setup = config.instance.gaussian()?;
    let exact = config.methods.contains(&Method::ExactKl);
    let blocks = per_radius(config, |r| {
        let mut errors = Vec::new();
        let mut keep = |x: Result<f64>| match x {
            Ok(v) => real(v),
            Err(e) => {
                errors.push(e.to_string());
                String::new()
            }
        };
        let gmi = gmi_worst_gaussian(&setup, r);
        let cost = cost_worst_gaussian(&setup, r);
        let mut row = vec![
            real(r),
            keep(gmi.as_ref().map(|g| g.value).map_err(Clone::clone)),
            keep(gmi.as_ref().map(|g| g.s).map_err(Clone::clone)),
            keep(gmi_approx_gaussian(&setup, r)),
            keep(cost.as_ref().map(|c| c.value).map_err(Clone::clone)),
            keep(cost.as_ref().map(|c| c.lambda).map_err(Clone::clone)),
            keep(gauss_additive_worst(&setup, r)),
            keep(fixed_cost_worst(&setup, r)),
        ];
        if exact {
            let noise = worst_noise_kl(&setup, r);
            row.push(keep(noise.as_ref().map(|d| additive_rate(&setup, d.second_moment)).map_err(Clone::clone)));
            row.push(keep(noise.map(|d| d.second_moment)));
        } else {
            row.extend(blank(2));
        }
        row.push(errors.join("; "));
        vec![row]
    })?;
    Ok(Table::new(&GAUSSIAN_HEADER, blocks))
}

pub const WORST_NOISE_HEADER: [&str; 14] = [
    "r",
    "row",
    "z",
    "density_kl",
    "density_chi2",
    "density_center",
    "z0",
    "lambda",
    "rho",
    "m2_kl",
    "m2_chi2",
    "kl_from_center",
    "kl_fallback",
    "error",
];

/// Sampled worst-case noise densities. Each radius gets one `summary` row
/// followed by one `sample` row per grid point. When no broken extremal
/// exists the chi-squared density stands in and `kl_fallback` is set.
pub fn cmd_worst_noise(config: &SweepConfig) -> Result<Table> {
    let setup = config.instance.gaussian()?;
    let sigma = setup.sigma_hat2.sqrt();
    let blocks = per_radius(config, |r| {
        let center = worst_noise_chi2(&setup, 0.0).expect("r = 0 is valid");
        let chi2 = worst_noise_chi2(&setup, r);
        let kl = worst_noise_kl(&setup, r);
        let mut error = Vec::new();
        if let Err(e) = &chi2 {
            error.push(e.to_string());
        }
        let fallback = matches!(kl, Err(Error::NoBrokenExtremal(_)));
        let kl: Option<NoiseDensity> = match kl {
            Ok(d) => Some(d),
            Err(Error::NoBrokenExtremal(_)) => chi2.as_ref().ok().cloned(),
            Err(e) => {
                error.push(e.to_string());
                None
            }
        };
        let chi2 = chi2.ok();
        let summary = vec![
            real(r),
            "summary".into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            opt(kl.as_ref().and_then(NoiseDensity::z0)),
            opt(kl.as_ref().and_then(NoiseDensity::lambda)),
            opt(kl.as_ref().and_then(NoiseDensity::rho)),
            opt(kl.as_ref().map(|d| d.second_moment)),
            opt(chi2.as_ref().map(|d| d.second_moment)),
            opt(kl.as_ref().map(|d| d.kl_from_center)),
            fallback.to_string(),
            error.join("; "),
        ];
        let mut rows = vec![summary];
        for &t in &config.z_grid {
            let z = setup.mu_hat + sigma * t;
            let mut row = vec![real(r), "sample".into(), real(z)];
            row.push(opt(kl.as_ref().map(|d| d.density(z))));
            row.push(opt(chi2.as_ref().map(|d| d.density(z))));
            row.push(real(center.density(z)));
            row.extend(blank(8));
            rows.push(row);
        }
        rows
    })?;
    Ok(Table::new(&WORST_NOISE_HEADER, blocks))
}
