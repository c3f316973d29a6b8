//! Reference solver over the relative-entropy ball next to the chi-squared
//! surrogate, with the mutual information of both worst channels.

use mismatch_ball::dmc::{mutual_information, BallSpec, Ensemble};
use mismatch_ball::instances::ternary_rate;
use mismatch_ball::worstcase::{worst_rate_chi2, worst_rate_exact_kl};

fn main() -> mismatch_ball::Result<()> {
    let (q, w) = ternary_rate();
    println!("I_MI(Q, W^) = {:.6}", mutual_information(&q, &w)?);
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "r", "LM chi2", "LM KL", "MI chi2 W", "MI KL W");
    for r in [0.001, 0.005, 0.01, 0.02, 0.05] {
        let approx = worst_rate_chi2(&q, &BallSpec::chi2(w.clone(), r)?, Ensemble::ConstantComposition)?;
        let exact = worst_rate_exact_kl(&q, &BallSpec::kl(w.clone(), r)?, Ensemble::ConstantComposition)?;
        println!(
            "{r:>6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            approx.value,
            exact.value,
            mutual_information(&q, &approx.worst_channel)?,
            mutual_information(&q, &exact.worst_channel)?
        );
    }
    Ok(())
}
