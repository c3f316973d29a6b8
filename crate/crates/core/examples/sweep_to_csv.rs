//! Run a radius sweep through the library API (what `mismatch-sweep rates`
//! does) and print the CSV.

use mismatch_ball::sweep::{run, Command, SweepConfig};

fn main() -> mismatch_ball::Result<()> {
    let config = SweepConfig::from_pairs([
        ("instance", "ternary-rate"),
        ("r-grid", "log:1e-3:0.05:5"),
        ("solver", "chi2,exact-kl"),
        ("ensemble", "cc"),
        ("worst-mi", "true"),
    ])?;
    let table = run(Command::Rates, &config)?;
    table.write_csv(std::io::stdout().lock())?;
    eprintln!("{} rows, {} failed", table.rows.len(), table.failures);
    Ok(())
}
