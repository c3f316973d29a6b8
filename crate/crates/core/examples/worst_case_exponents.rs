//! Worst-case Gallager functions and error exponents over both balls for the
//! ternary exponent instance at rho = 0.7.

use mismatch_ball::dmc::{BallSpec, Ensemble};
use mismatch_ball::instances::{ternary_exponent, TERNARY_EXPONENT_RHO};
use mismatch_ball::worstcase::{worst_e0_chi2, worst_e0_exact_kl, worst_exponent, Solver};

fn main() -> mismatch_ball::Result<()> {
    let (q, w) = ternary_exponent();
    let rho = TERNARY_EXPONENT_RHO;
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "r", "chi2 iid", "chi2 cc", "KL iid", "KL cc");
    for r in [0.0, 0.002, 0.005, 0.01, 0.02] {
        let chi2 = BallSpec::chi2(w.clone(), r)?;
        let kl = BallSpec::kl(w.clone(), r)?;
        println!(
            "{r:>6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            worst_e0_chi2(&q, &chi2, rho, Ensemble::Iid)?.value,
            worst_e0_chi2(&q, &chi2, rho, Ensemble::ConstantComposition)?.value,
            worst_e0_exact_kl(&q, &kl, rho, Ensemble::Iid)?.value,
            worst_e0_exact_kl(&q, &kl, rho, Ensemble::ConstantComposition)?.value,
        );
    }

    let ball = BallSpec::kl(w, 0.01)?;
    println!("\nexponent over the KL ball, r = 0.01:");
    for rate in [0.0, 0.1, 0.2, 0.3] {
        let e = worst_exponent(&q, &ball, rate, Ensemble::Iid, Solver::ExactKl)?;
        println!("  R = {rate:.2}: E = {:.6} at rho* = {:.3}", e.value, e.rho);
    }
    Ok(())
}
