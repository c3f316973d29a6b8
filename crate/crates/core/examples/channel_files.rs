//! Load an input distribution and a metric from CSV files and report the
//! worst-case rates. Without arguments a pair of files is written to the
//! temp directory first.
//!
//! cargo run --example channel_files -- q.csv w.csv 0.01

use std::path::PathBuf;

use mismatch_ball::dmc::io::{load_channel, load_input_distribution};
use mismatch_ball::dmc::{BallSpec, Ensemble};
use mismatch_ball::worstcase::{worst_rate_chi2, worst_rate_exact_kl};

fn main() -> mismatch_ball::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (q_path, w_path, r) = match args.as_slice() {
        [q, w, r] => (PathBuf::from(q), PathBuf::from(w), r.parse().expect("radius")),
        [q, w] => (PathBuf::from(q), PathBuf::from(w), 0.01),
        _ => {
            let dir = std::env::temp_dir();
            let (q, w) = (dir.join("mismatch-q.csv"), dir.join("mismatch-w.csv"));
            std::fs::write(&q, "0.25, 0.25, 0.5\n")?;
            std::fs::write(&w, "# rows are inputs\n0.8, 0.1, 0.1\n0.1, 0.8, 0.1\n0.05, 0.15, 0.8\n")?;
            (q, w, 0.01)
        }
    };
    let q = load_input_distribution(&q_path)?;
    let w = load_channel(&w_path)?;
    println!("{} inputs, {} outputs, r = {r}", w.num_inputs(), w.num_outputs());
    for ens in [Ensemble::Iid, Ensemble::ConstantComposition] {
        let approx = worst_rate_chi2(&q, &BallSpec::chi2(w.clone(), r)?, ens)?;
        let exact = worst_rate_exact_kl(&q, &BallSpec::kl(w.clone(), r)?, ens)?;
        println!("{:>3}: chi2 {:.6} (feasible {}), KL {:.6}", ens.as_str(), approx.value, approx.feasible, exact.value);
    }
    Ok(())
}
