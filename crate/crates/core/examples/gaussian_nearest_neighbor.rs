//! Gaussian codebooks with nearest-neighbor decoding: worst-case GMI, its
//! s = 1 approximation, the power-cost rate and the additive-noise rate.

use mismatch_ball::gaussian::{
    cost_worst_gaussian, e0_worst_gaussian, gauss_additive_worst, gmi_approx_gaussian, gmi_worst_gaussian,
    GaussianSetup,
};

fn main() -> mismatch_ball::Result<()> {
    for snr in [0.5, 1.0, 10.0] {
        let setup = GaussianSetup::with_snr(snr)?;
        println!("SNR {snr}: matched rate {:.6}", 0.5 * snr.ln_1p());
        println!("  {:>6} {:>9} {:>9} {:>9} {:>9} {:>9}", "r", "GMI", "approx", "cost", "additive", "E0(1)");
        for r in [1e-4, 1e-3, 0.01, 0.05] {
            let cost = cost_worst_gaussian(&setup, r)?;
            println!(
                "  {r:>6} {:>9.6} {:>9.6} {:>9.6} {:>9.6} {:>9.6}",
                gmi_worst_gaussian(&setup, r)?.value,
                gmi_approx_gaussian(&setup, r)?,
                cost.value,
                gauss_additive_worst(&setup, r)?,
                e0_worst_gaussian(&setup, 1.0, r)?.value,
            );
        }
    }
    Ok(())
}
