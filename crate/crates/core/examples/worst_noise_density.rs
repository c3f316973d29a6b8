//! Worst-case additive noise in the relative-entropy ball (a broken extremal
//! with jumps at ±z0) against the smooth chi-squared worst case.

use mismatch_ball::gaussian::{additive_rate, worst_noise_chi2, worst_noise_kl, GaussianSetup};

fn main() -> mismatch_ball::Result<()> {
    let setup = GaussianSetup::new(1.0, 1.0, 0.0)?;
    let r = 0.05;
    let kl = worst_noise_kl(&setup, r)?;
    let chi2 = worst_noise_chi2(&setup, r)?;
    let (inside, outside) = kl.jump().expect("broken extremal");
    println!("z0 = {:.4}, lambda = {:.4}, rho = {:.4}", kl.z0().unwrap(), kl.lambda().unwrap(), kl.rho().unwrap());
    println!("jump at z0: {inside:.3e} inside, {outside:.3e} outside");
    println!("second moment: KL {:.5}, chi2 {:.5}", kl.second_moment, chi2.second_moment);
    println!(
        "rate 0.5 log(1 + P/m2): KL {:.5}, chi2 {:.5}",
        additive_rate(&setup, kl.second_moment),
        additive_rate(&setup, chi2.second_moment)
    );
    println!("\n{:>5} {:>12} {:>12}", "z", "W* (KL)", "W~ (chi2)");
    for k in -8..=8 {
        let z = 0.5 * k as f64;
        println!("{z:>5.1} {:>12.5e} {:>12.5e}", kl.density(z), chi2.density(z));
    }
    Ok(())
}
