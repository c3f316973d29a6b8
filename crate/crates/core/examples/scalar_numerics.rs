//! The scalar toolbox the solvers are built on: bracketed maximization,
//! Brent roots, Gauss-Kronrod quadrature and coordinate ascent.

use mismatch_ball::numerics::{
    find_root, integrate_1d, integrate_2d_gaussian_weighted, maximize_halfline, maximize_multid, GaussianWeight,
    ScalarBracket, Tolerances,
};

fn main() -> mismatch_ball::Result<()> {
    // the bracket grows until the maximum of s·e^{-s/5} at s = 5 is inside
    let peak = maximize_halfline(|s| s * (-s / 5.0).exp(), ScalarBracket::new(0.0, 1.0, 1e-10));
    println!("argmax s e^(-s/5) = {:.8} (5)", peak.argmax());

    let root = find_root(|x| x.cos() - x, ScalarBracket::new(0.0, 1.0, 1e-14))?;
    println!("cos x = x at {root:.12}");

    let q = integrate_1d(|x| (-x * x).exp(), -8.0, 8.0, 1e-13)?;
    println!("int e^(-x^2) = {:.14} (sqrt pi = {:.14}), error {:.1e}", q.value, std::f64::consts::PI.sqrt(), q.error);

    let e = integrate_2d_gaussian_weighted(|x, y| (x + y).powi(2), GaussianWeight::new(0.0, 2.0), GaussianWeight::new(0.0, 1.0), 1e-10)?;
    println!("E[(X+Y)^2] with var 2 and 1: {:.10}", e.value);

    let best = maximize_multid(
        |v| -(v[0] - 1.0).powi(2) - 3.0 * (v[1] + 0.5).powi(2) - v[0] * v[1],
        &[0.0, 0.0],
        &[(f64::NEG_INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::INFINITY)],
        &Tolerances::default(),
    );
    println!("coordinate ascent: {:.6?} after {} sweeps", best.point, best.iterations);
    Ok(())
}
