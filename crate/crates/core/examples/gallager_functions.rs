//! Matched Gallager functions for iid and constant-composition codes and the
//! resulting random-coding exponent curve.

use mismatch_ball::dmc::{gallager_e0_cc, gallager_e0_iid};
use mismatch_ball::instances::ternary_exponent;
use mismatch_ball::numerics::{maximize_unimodal_1d, ScalarBracket};

fn main() -> mismatch_ball::Result<()> {
    let (q, w) = ternary_exponent();
    println!("{:>5} {:>10} {:>10}", "rho", "E0 iid", "E0 cc");
    for k in 0..=10 {
        let rho = k as f64 / 10.0;
        println!("{rho:>5.1} {:>10.6} {:>10.6}", gallager_e0_iid(&q, &w, rho)?, gallager_e0_cc(&q, &w, rho)?.value);
    }

    println!("\n{:>6} {:>10} {:>6}", "R", "E_r(R)", "rho*");
    for k in 0..=6 {
        let rate = 0.05 * k as f64;
        let best = maximize_unimodal_1d(
            |rho| gallager_e0_iid(&q, &w, rho).map_or(f64::NEG_INFINITY, |e| e - rho * rate),
            ScalarBracket::new(0.0, 1.0, 1e-9),
        );
        println!("{rate:>6.2} {:>10.6} {:>6.3}", best.value, best.argmax());
    }
    Ok(())
}
