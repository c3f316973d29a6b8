use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mismatch_ball::sweep::{self, Command, SweepConfig, EXIT_CONFIG, EXIT_SOLVER};
use mismatch_ball::Error;

/// Sweep worst-case mismatched-decoding rates and exponents over a radius grid.
#[derive(Parser)]
#[command(name = "mismatch-sweep", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Worst-case GMI / LM rates over chi-squared or KL balls
    Rates(Common),
    /// Worst-case Gallager E0 (and exponents with --rate)
    Exponents(Common),
    /// Gaussian codebooks with nearest-neighbor decoding
    Gaussian(Common),
    /// Sampled worst-case additive noise densities
    WorstNoise(Common),
}

#[derive(Args)]
struct Common {
    /// key=value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// ternary-rate, ternary-exponent, files or gaussian
    #[arg(long)]
    instance: Option<String>,
    /// `a,b,c`, `lin:a:b:n` or `log:a:b:n`
    #[arg(long)]
    r_grid: Option<String>,
    #[arg(long)]
    rho: Option<f64>,
    /// comma list of iid, cc, cost, lm
    #[arg(long)]
    ensemble: Option<String>,
    /// comma list of chi2, exact-kl, bounds
    #[arg(long)]
    solver: Option<String>,
    /// CSV destination (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    jobs: Option<usize>,
    /// extra key=value settings, repeatable
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn overrides(&self) -> Result<Vec<(String, String)>, Error> {
        let mut pairs = Vec::new();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                pairs.push((k.to_string(), v));
            }
        };
        push("instance", self.instance.clone());
        push("r-grid", self.r_grid.clone());
        push("rho", self.rho.map(|x| x.to_string()));
        push("ensemble", self.ensemble.clone());
        push("solver", self.solver.clone());
        push("out", self.out.as_ref().map(|p| p.display().to_string()));
        push("tol", self.tol.map(|x| x.to_string()));
        push("jobs", self.jobs.map(|x| x.to_string()));
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got '{kv}'")))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(pairs)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match &cli.command {
        Cmd::Rates(c) => (Command::Rates, c),
        Cmd::Exponents(c) => (Command::Exponents, c),
        Cmd::Gaussian(c) => (Command::Gaussian, c),
        Cmd::WorstNoise(c) => (Command::WorstNoise, c),
    };
    let config = match common.overrides().and_then(|o| SweepConfig::load(common.config.as_deref(), &o)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let table = match sweep::run(command, &config) {
        Ok(t) => t,
        Err(e @ Error::Config(_)) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
        Err(e) => {
            eprintln!("solver error: {e}");
            return ExitCode::from(EXIT_SOLVER as u8);
        }
    };
    let written = match &config.out {
        Some(path) => File::create(path)
            .map_err(Error::from)
            .and_then(|f| table.write_csv(BufWriter::new(f))),
        None => table.write_csv(io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(EXIT_CONFIG as u8);
    }
    let dest = config.out.as_ref().map_or("stdout".to_string(), |p| p.display().to_string());
    eprintln!(
        "{} rows for {} radii -> {dest}; {} failed",
        table.rows.len(),
        config.r_grid.len(),
        table.failures
    );
    ExitCode::from(table.exit_code() as u8)
}
