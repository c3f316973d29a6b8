//! Closed forms for symmetric and modulo-additive metrics with equiprobable
//! inputs, checked against the generic solver on the expanded matrix.

use mismatch_ball::dmc::{BallSpec, Ensemble, InputDistribution};
use mismatch_ball::structured::{
    kappa, modulo_additive_worst_e0, modulo_additive_worst_gmi, symmetric_worst_channel, symmetric_worst_gmi,
    ModuloAdditiveMetric, SymmetricMetric,
};
use mismatch_ball::worstcase::worst_rate_chi2;

fn main() -> mismatch_ball::Result<()> {
    let bsc = ModuloAdditiveMetric::new(0.1, 2)?;
    let r = 0.01;
    let gmi = modulo_additive_worst_gmi(&bsc, r)?;
    println!("BSC(0.1), r = {r}: GMI {:.6} at s = {:.4}, worst crossover {:.6}", gmi.value, gmi.s, gmi.q_worst);
    println!("  E0(rho = 1) = {:.6}", modulo_additive_worst_e0(&bsc, 1.0, r)?.value);

    let m = SymmetricMetric::cyclic(vec![0.7, 0.2, 0.1])?;
    println!("\ncyclic metric [0.7, 0.2, 0.1]: kappa_2 = {:.4}, kappa_0.5 = {:.4}", kappa(&m, 2.0), kappa(&m, 0.5));
    let q = InputDistribution::uniform(3);
    for r in [0.001, 0.01, 0.05] {
        let closed = symmetric_worst_gmi(&m, r)?;
        let generic = worst_rate_chi2(&q, &BallSpec::chi2(m.to_channel(), r)?, Ensemble::Iid)?;
        println!("  r = {r:<5}: closed form {:.10}, generic {:.10}", closed.value, generic.value);
    }
    println!("worst channel at r = 0.05 (symmetric again):");
    for row in symmetric_worst_channel(&m, 0.05)?.rows() {
        println!("  {row:.5?}");
    }
    Ok(())
}
