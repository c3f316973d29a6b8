//! GMI, LM rate and mutual information when decoding with a wrong channel
//! estimate: the true channel is a BSC(0.11), the decoder assumes an
//! asymmetric binary channel. With two inputs and two outputs the LM rate
//! recovers I(Q, W), since the tilt a(x) absorbs the asymmetry.

use mismatch_ball::dmc::{gmi_rate, info_density_table, lm_rate, mutual_information, DiscreteChannel, InputDistribution};

fn main() -> mismatch_ball::Result<()> {
    let q = InputDistribution::new(vec![0.3, 0.7])?;
    let metric = DiscreteChannel::new(vec![vec![0.9, 0.1], vec![0.2, 0.8]])?;
    let channel = DiscreteChannel::new(vec![vec![0.89, 0.11], vec![0.11, 0.89]])?;

    let mi = mutual_information(&q, &channel)?;
    let gmi = gmi_rate(&q, &metric, &channel)?;
    let lm = lm_rate(&q, &metric, &channel)?;
    println!("I(Q, W)      = {mi:.6} nats");
    println!("GMI          = {:.6} nats at s = {:.4}", gmi.value, gmi.params.s);
    println!("LM rate      = {:.6} nats at s = {:.4}, a = {:?}", lm.value, lm.params.s, lm.params.a);

    let i = info_density_table(&gmi.params, &q, &metric)?;
    println!("information density at the GMI optimum:");
    for x in 0..i.nx() {
        println!("  x={x}: {:?}", i.row(x));
    }
    Ok(())
}
