//! Worst-case GMI and LM rates over a chi-squared ball: the closed-form
//! penalty `I^ML − √(2rV)`, the worst channel and its feasibility radius.

use mismatch_ball::dmc::{BallSpec, Ensemble, MetricParams};
use mismatch_ball::instances::ternary_rate;
use mismatch_ball::worstcase::{lower_bound_rate, rate_dispersion, worst_rate_chi2};

fn main() -> mismatch_ball::Result<()> {
    let (q, w) = ternary_rate();
    let v = rate_dispersion(&MetricParams::gmi(1.0, q.len()), &q, &w)?;
    println!("V at s = 1: {v:.6}");
    println!("{:>7} {:>10} {:>10} {:>10} {:>8} {:>8}", "r", "GMI", "LM", "bound", "s*", "r_max");
    for r in [0.0, 0.001, 0.005, 0.01, 0.05, 0.1] {
        let ball = BallSpec::chi2(w.clone(), r)?;
        let gmi = worst_rate_chi2(&q, &ball, Ensemble::Iid)?;
        let lm = worst_rate_chi2(&q, &ball, Ensemble::ConstantComposition)?;
        println!(
            "{r:>7} {:>10.6} {:>10.6} {:>10.6} {:>8.4} {:>8.4}",
            gmi.value,
            lm.value,
            lower_bound_rate(&q, &w, r)?,
            gmi.params.s,
            gmi.feasibility_radius
        );
    }

    let worst = worst_rate_chi2(&q, &BallSpec::chi2(w.clone(), 0.05)?, Ensemble::Iid)?;
    println!("\nworst channel at r = 0.05 (chi2 distance {:.6}):", worst.attained_distance);
    for row in worst.worst_channel.rows() {
        println!("  {row:.5?}");
    }
    Ok(())
}
