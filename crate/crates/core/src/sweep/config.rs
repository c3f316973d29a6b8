use std::path::{Path, PathBuf};

use crate::dmc::io::{load_channel, load_input_distribution};
use crate::dmc::{DiscreteChannel, Ensemble, InputDistribution};
use crate::error::{Error, Result};
use crate::gaussian::GaussianSetup;
use crate::instances;
use crate::numerics::Tolerances;

/// Where the sweep gets its model from.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    TernaryRate,
    TernaryExponent,
    Files { q: PathBuf, w: PathBuf },
    Gaussian(GaussianSetup),
}

impl Instance {
    pub fn discrete(&self) -> Result<(InputDistribution, DiscreteChannel)> {
        match self {
            Instance::TernaryRate => Ok(instances::ternary_rate()),
            Instance::TernaryExponent => Ok(instances::ternary_exponent()),
            Instance::Files { q, w } => {
                let q = load_input_distribution(q)?;
                let w = load_channel(w)?;
                if q.len() != w.num_inputs() {
                    return Err(Error::Config(format!(
                        "input distribution has {} symbols, metric has {} rows",
                        q.len(),
                        w.num_inputs()
                    )));
                }
                Ok((q, w))
            }
            Instance::Gaussian(_) => Err(Error::Config("this command needs a discrete instance".into())),
        }
    }

    pub fn gaussian(&self) -> Result<GaussianSetup> {
        match self {
            Instance::Gaussian(g) => Ok(*g),
            _ => Err(Error::Config("this command needs instance=gaussian".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Chi2,
    ExactKl,
    Bounds,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Chi2 => "chi2",
            Method::ExactKl => "exact-kl",
            Method::Bounds => "bounds",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "chi2" => Ok(Method::Chi2),
            "exact-kl" | "exact" | "kl" => Ok(Method::ExactKl),
            "bounds" | "bound" => Ok(Method::Bounds),
            other => Err(Error::Config(format!("unknown solver '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub instance: Instance,
    pub r_grid: Vec<f64>,
    pub methods: Vec<Method>,
    pub ensembles: Vec<Ensemble>,
    pub rho: f64,
    /// Emit exponents `max_ρ E0(ρ) − ρR` at this rate.
    pub rate: Option<f64>,
    pub out: Option<PathBuf>,
    pub tol: Tolerances,
    pub jobs: Option<usize>,
    /// Mutual information of each worst channel.
    pub worst_mi: bool,
    /// Noise grid for `worst-noise`, in units of the metric noise.
    pub z_grid: Vec<f64>,
}

impl SweepConfig {
    /// Build from `key=value` pairs; later pairs override earlier ones.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut instance = "ternary-rate".to_string();
        let mut q_file = None;
        let mut w_file = None;
        let (mut power, mut sigma2, mut mu) = (1.0, 1.0, 0.0);
        let mut r_grid = None;
        let mut methods = vec![Method::Chi2, Method::ExactKl, Method::Bounds];
        let mut ensembles = vec![Ensemble::Iid, Ensemble::ConstantComposition];
        let mut rho = instances::TERNARY_EXPONENT_RHO;
        let mut rate = None;
        let mut out = None;
        let mut tol = Tolerances::default();
        let mut jobs = None;
        let mut worst_mi = false;
        let mut z_grid = "lin:-6:6:241".to_string();
        for (key, value) in pairs {
            let value = value.trim();
            match key.trim().replace('_', "-").as_str() {
                "instance" => instance = value.to_string(),
                "q" | "q-file" => q_file = Some(PathBuf::from(value)),
                "w" | "w-file" | "metric" => w_file = Some(PathBuf::from(value)),
                "power" | "snr" => power = parse_real(key, value)?,
                "sigma2" => sigma2 = parse_real(key, value)?,
                "mu" => mu = parse_real(key, value)?,
                "r-grid" => r_grid = Some(parse_grid(value)?),
                "solver" => methods = parse_list(value)?,
                "ensemble" => ensembles = parse_list(value)?,
                "rho" => rho = parse_real(key, value)?,
                "rate" => rate = Some(parse_real(key, value)?),
                "out" => out = Some(PathBuf::from(value)),
                "tol" => tol = tol.with_value(parse_real(key, value)?),
                "jobs" => {
                    jobs = Some(value.parse::<usize>().ok().filter(|j| *j > 0).ok_or_else(|| {
                        Error::Config(format!("jobs must be a positive integer, got '{value}'"))
                    })?)
                }
                "worst-mi" => {
                    worst_mi = value
                        .parse::<bool>()
                        .map_err(|_| Error::Config(format!("worst-mi must be true or false, got '{value}'")))?
                }
                "z-grid" => z_grid = value.to_string(),
                other => return Err(Error::Config(format!("unknown key '{other}'"))),
            }
        }
        let instance = match instance.as_str() {
            "ternary-rate" => Instance::TernaryRate,
            "ternary-exponent" => Instance::TernaryExponent,
            "files" => Instance::Files {
                q: q_file.ok_or_else(|| Error::Config("instance=files needs q".into()))?,
                w: w_file.ok_or_else(|| Error::Config("instance=files needs w".into()))?,
            },
            "gaussian" => Instance::Gaussian(
                GaussianSetup::new(power * sigma2, sigma2, mu).map_err(|e| Error::Config(e.to_string()))?,
            ),
            other => return Err(Error::Config(format!("unknown instance '{other}'"))),
        };
        let r_grid = r_grid.ok_or_else(|| Error::Config("r-grid is required".into()))?;
        check_r_grid(&r_grid)?;
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::Config(format!("rho = {rho} outside [0, 1]")));
        }
        if let Some(r) = rate.filter(|r| !(*r >= 0.0)) {
            return Err(Error::Config(format!("rate = {r} must be non-negative")));
        }
        if !(tol.value > 0.0) {
            return Err(Error::Config("tol must be positive".into()));
        }
        methods.sort();
        methods.dedup();
        ensembles.dedup();
        Ok(Self {
            instance,
            r_grid,
            methods,
            ensembles,
            rho,
            rate,
            out,
            tol,
            jobs,
            worst_mi,
            z_grid: parse_grid(&z_grid)?,
        })
    }

    /// Parse a `key=value` file (`#` comments, blank lines ignored) and
    /// apply `overrides` on top.
    pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?,
            None => String::new(),
        };
        let mut pairs = parse_key_values(&text)?;
        pairs.extend(overrides.iter().cloned());
        Self::from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))
    }
}

pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", n + 1)))?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

fn parse_real(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Config(format!("{key}: '{value}' is not a finite number")))
}

fn parse_list<T: std::str::FromStr<Err = Error>>(value: &str) -> Result<Vec<T>> {
    let items = value.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect::<Result<Vec<T>>>()?;
    if items.is_empty() {
        return Err(Error::Config(format!("empty list '{value}'")));
    }
    Ok(items)
}

/// `a,b,c`, `log:a:b:n` (geometric, `a > 0`) or `lin:a:b:n`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    let bad = || Error::Config(format!("bad grid '{spec}'"));
    if let Some(rest) = spec.strip_prefix("log:").or_else(|| spec.strip_prefix("lin:")) {
        let parts: Vec<&str> = rest.split(':').collect();
        let [a, b, n] = parts[..] else { return Err(bad()) };
        let (a, b) = (parse_real("grid", a)?, parse_real("grid", b)?);
        let n: usize = n.parse().map_err(|_| bad())?;
        if n == 0 {
            return Ok(vec![]);
        }
        if n == 1 {
            return Ok(vec![a]);
        }
        let t = |k: usize| k as f64 / (n - 1) as f64;
        if spec.starts_with("log:") {
            if !(a > 0.0 && b > 0.0) {
                return Err(Error::Config(format!("log grid needs positive ends, got '{spec}'")));
            }
            Ok((0..n).map(|k| a * (b / a).powf(t(k))).collect())
        } else {
            Ok((0..n).map(|k| a + (b - a) * t(k)).collect())
        }
    } else {
        spec.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_real("grid", s.trim()))
            .collect()
    }
}

fn check_r_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config("empty r grid".into()));
    }
    if let Some(r) = grid.iter().find(|r| **r < 0.0) {
        return Err(Error::Config(format!("negative radius {r}")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("r grid must be strictly increasing".into()));
    }
    Ok(())
}
