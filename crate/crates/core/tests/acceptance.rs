//! Acceptance criteria 1-11. Each test prints one `criterion N: PASS|FAIL`
//! line (run with `--nocapture` to see them) and then asserts.

mod common;

use std::time::{Duration, Instant};

use mismatch_ball::dmc::{
    gallager_e0_cc, mutual_information, BallSpec, DiscreteChannel, Ensemble, InputDistribution, MetricParams,
};
use mismatch_ball::gaussian::{
    additive_rate, e0_ml_gaussian, fixed_cost_worst, gauss_additive_worst, rate_dispersion_gaussian,
    rate_ml_gaussian, v1_gaussian, v2_gaussian, worst_noise_chi2, worst_noise_kl, GaussianSetup, NoiseShape,
};
use mismatch_ball::instances::{self, TERNARY_EXPONENT_RHO};
use mismatch_ball::structured::{symmetric_worst_e0, symmetric_worst_gmi, SymmetricMetric};
use mismatch_ball::worstcase::{
    e0_feasibility_radius, feasibility_radius, worst_channel_chi2, worst_e0_channel_chi2, worst_e0_chi2,
    worst_e0_exact_kl, worst_rate_chi2, worst_rate_exact_kl, WorstCaseResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn within(elapsed: Duration, secs: u64) -> bool {
    elapsed < Duration::from_secs(secs)
}

fn non_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0] + 1e-12)
}

fn rate(q: &InputDistribution, w: &DiscreteChannel, r: f64, ens: Ensemble, exact: bool) -> WorstCaseResult {
    if exact {
        worst_rate_exact_kl(q, &BallSpec::kl(w.clone(), r).unwrap(), ens).unwrap()
    } else {
        worst_rate_chi2(q, &BallSpec::chi2(w.clone(), r).unwrap(), ens).unwrap()
    }
}

#[test]
fn criterion_01_zero_radius_collapse() {
    let start = Instant::now();
    let (q, w) = instances::ternary_rate();
    let mi = common::mutual_information(q.probs(), &common::rows(&w));
    let mut worst_gap = 0.0f64;
    let mut worst_s = 0.0f64;
    for ens in [Ensemble::Iid, Ensemble::ConstantComposition] {
        for res in [rate(&q, &w, 0.0, ens, false), rate(&q, &w, 1e-8, ens, true)] {
            worst_gap = worst_gap.max((res.value - mi).abs());
            worst_s = worst_s.max((res.params.s - 1.0).abs());
        }
    }
    let lib_mi = mutual_information(&q, &w).unwrap();
    worst_gap = worst_gap.max((lib_mi - mi).abs());
    let elapsed = start.elapsed();
    verdict(
        1,
        worst_gap <= 1e-3 && worst_s <= 1e-3 && within(elapsed, 5),
        format!("max |value - I_MI| = {worst_gap:.2e}, max |s - 1| = {worst_s:.2e}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_02_chi2_tracks_exact_kl() {
    let start = Instant::now();
    let (q, w) = instances::ternary_rate();
    let grid = [0.001, 0.002, 0.005, 0.01, 0.02, 0.05];
    let mut ok = true;
    let mut details = Vec::new();
    for (ens, name) in [(Ensemble::Iid, "GMI"), (Ensemble::ConstantComposition, "LM")] {
        let chi2: Vec<f64> = grid.iter().map(|&r| rate(&q, &w, r, ens, false).value).collect();
        let exact: Vec<f64> = grid.iter().map(|&r| rate(&q, &w, r, ens, true).value).collect();
        let gaps: Vec<f64> = chi2.iter().zip(&exact).map(|(a, b)| (a - b).abs()).collect();
        let first_bad = grid.iter().zip(&gaps).find(|(_, g)| **g > 0.01).map(|(r, _)| *r);
        let max_gap = gaps.iter().cloned().fold(0.0, f64::max);
        ok &= first_bad.is_none() && non_increasing(&chi2) && non_increasing(&exact);
        details.push(format!(
            "{name}: max gap {max_gap:.4} at r=0.05, first r over 0.01 = {first_bad:?}, monotone {}",
            non_increasing(&chi2) && non_increasing(&exact)
        ));
    }
    let elapsed = start.elapsed();
    ok &= within(elapsed, 60);
    verdict(2, ok, format!("{}; {elapsed:.2?}", details.join("; ")));
}

#[test]
fn criterion_03_sqrt_r_penalty() {
    let (q, w) = instances::ternary_rate();
    let v0 = rate(&q, &w, 0.0, Ensemble::Iid, false).value;
    let mut worst = 0.0f64;
    for exact in [false, true] {
        let slope = |r: f64| (v0 - rate(&q, &w, r, Ensemble::Iid, exact).value) / r.sqrt();
        let reference = slope(1e-4);
        for k in 0..=8 {
            let r = 1e-5 * 10f64.powf(k as f64 / 4.0);
            worst = worst.max((slope(r) / reference - 1.0).abs());
        }
    }
    verdict(3, worst <= 0.2, format!("max relative deviation of the sqrt(r) slope = {worst:.3}"));
}

#[test]
fn criterion_04_feasibility_radius() {
    let (q, w) = instances::ternary_rate();
    let radii: Vec<f64> = [Ensemble::Iid, Ensemble::ConstantComposition]
        .into_iter()
        .map(|ens| rate(&q, &w, 0.01, ens, false).feasibility_radius)
        .collect();
    let bsc = feasibility_radius(&InputDistribution::uniform(2), &instances::bsc(0.1), &MetricParams::gmi(1.0, 2))
        .unwrap();
    verdict(
        4,
        radii.iter().all(|r| *r > 2.0) && (bsc - 4.5).abs() <= 1e-12,
        format!("ternary radii {radii:.4?}, BSC(0.1) radius - 4.5 = {:.1e}", bsc - 4.5),
    );
}

#[test]
fn criterion_05_penalty_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_rate, mut worst_e0) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let (nx, ny) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let (q, w) = common::random_instance(&mut rng, nx, ny);
        let s = rng.gen_range(0.2..3.0);
        let a: Vec<f64> = (0..nx).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let rho = rng.gen_range(0.1..1.0);
        let params = MetricParams::tilted(s, a.clone());
        let (qp, wr) = (q.probs(), common::rows(&w));

        let r = 0.1 * feasibility_radius(&q, &w, &params).unwrap();
        let worst = common::rows(&worst_channel_chi2(&q, &w, r, &params).unwrap());
        let i = common::info_density(qp, &wr, s, &a);
        let expected = common::mean(qp, &wr, &i) - (2.0 * r * common::cond_var(qp, &wr, &i)).sqrt();
        worst_rate = worst_rate.max((common::mean(qp, &worst, &i) - expected).abs());

        let r = 0.1 * e0_feasibility_radius(&q, &w, &params, rho).unwrap();
        let worst = common::rows(&worst_e0_channel_chi2(&q, &w, r, &params, rho).unwrap());
        let eps = common::exponent_density(qp, &wr, s, &a, rho);
        let e = common::mean(qp, &wr, &eps);
        let v = common::cond_var(qp, &wr, &eps) / (e * e);
        let expected = -e.ln() - (2.0 * r * v).sqrt().ln_1p();
        worst_e0 = worst_e0.max((-common::mean(qp, &worst, &eps).ln() - expected).abs());
    }
    let elapsed = start.elapsed();
    verdict(
        5,
        worst_rate <= 1e-12 && worst_e0 <= 1e-12 && within(elapsed, 10),
        format!("max rate residual {worst_rate:.1e}, max exponent residual {worst_e0:.1e}, {elapsed:.2?}"),
    );
}

fn random_symmetric(rng: &mut ChaCha8Rng, k: usize) -> SymmetricMetric {
    if k % 5 == 4 {
        // non-square Gallager-symmetric layout: 4 inputs, 2 outputs
        let row = common::random_simplex(rng, 2, 0.05);
        return SymmetricMetric::with_permutations(row, vec![vec![0, 1], vec![1, 0], vec![0, 1], vec![1, 0]]).unwrap();
    }
    let n = rng.gen_range(2..=5);
    SymmetricMetric::cyclic(common::random_simplex(rng, n, 0.05)).unwrap()
}

#[test]
fn criterion_06_structured_vs_generic() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut rate_gap, mut e0_gap) = (0.0f64, 0.0f64);
    for k in 0..20 {
        let m = random_symmetric(&mut rng, k);
        let w = m.to_channel();
        let q = InputDistribution::uniform(m.num_inputs());
        let r = rng.gen_range(0.001..0.05);
        let ball = BallSpec::chi2(w, r).unwrap();
        let closed = symmetric_worst_gmi(&m, r).unwrap().value;
        let generic = worst_rate_chi2(&q, &ball, Ensemble::Iid).unwrap().value;
        rate_gap = rate_gap.max((closed - generic).abs());
        for rho in [0.25, 0.7, 1.0] {
            let closed = symmetric_worst_e0(&m, rho, r).unwrap().value;
            let generic = worst_e0_chi2(&q, &ball, rho, Ensemble::Iid).unwrap().value;
            e0_gap = e0_gap.max((closed - generic).abs());
        }
    }
    verdict(
        6,
        rate_gap <= 1e-10 && e0_gap <= 1e-10,
        format!("max rate gap {rate_gap:.1e}, max E0 gap {e0_gap:.1e}"),
    );
}

#[test]
fn criterion_07_exponent_orderings() {
    let (q, w) = instances::ternary_exponent();
    let rho = TERNARY_EXPONENT_RHO;
    let grid = [0.0, 0.001, 0.002, 0.005, 0.01, 0.02];
    let curve = |ens: Ensemble, exact: bool| -> Vec<f64> {
        grid.iter()
            .map(|&r| {
                if exact {
                    worst_e0_exact_kl(&q, &BallSpec::kl(w.clone(), r).unwrap(), rho, ens).unwrap().value
                } else {
                    worst_e0_chi2(&q, &BallSpec::chi2(w.clone(), r).unwrap(), rho, ens).unwrap().value
                }
            })
            .collect()
    };
    let (ci, cc) = (curve(Ensemble::Iid, false), curve(Ensemble::ConstantComposition, false));
    let (ei, ec) = (curve(Ensemble::Iid, true), curve(Ensemble::ConstantComposition, true));
    let ordered = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| *x <= y + 1e-9);
    let monotone = [&ci, &cc, &ei, &ec].iter().all(|c| non_increasing(c));
    let matched_iid = common::gallager_e0(q.probs(), &common::rows(&w), rho);
    let matched_cc = gallager_e0_cc(&q, &w, rho).unwrap().value;
    let at_zero = [
        (ci[0] - matched_iid).abs(),
        (ei[0] - matched_iid).abs(),
        (cc[0] - matched_cc).abs(),
        (ec[0] - matched_cc).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    // exact at r = 0 must agree with chi2 at r = 0 too
    verdict(
        7,
        ordered(&ei, &ec) && ordered(&ci, &cc) && monotone && at_zero <= 1e-6,
        format!(
            "iid<=cc exact {}, chi2 {}; monotone {monotone}; max |E0(0) - matched| = {at_zero:.1e}",
            ordered(&ei, &ec),
            ordered(&ci, &cc)
        ),
    );
}

#[test]
fn criterion_08_gaussian_closed_forms() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut compared = 0;
    let mut outside = Vec::new();
    for gamma in [0.5, 1.0, 2.0] {
        let setup = GaussianSetup::with_snr(gamma).unwrap();
        let oracle = common::GaussOracle::new(gamma, 45.0, 0.025);
        for s in [0.5, 1.0, 2.0] {
            for lambda in [0.0, 0.1, -0.2] {
                let (ml, v) = oracle.rate_moments(s, lambda);
                worst = worst.max((rate_ml_gaussian(&setup, s, lambda).unwrap() - ml).abs());
                worst = worst.max((rate_dispersion_gaussian(&setup, s, lambda).unwrap() - v).abs());
                compared += 2;
            }
            for rho in [0.3, 0.8] {
                let closed = (e0_ml_gaussian(&setup, s, rho), v1_gaussian(&setup, s, rho), v2_gaussian(&setup, s, rho));
                match closed {
                    (Ok(e), Ok(v1), Ok(v2)) => {
                        let (oe, ov1, ov2) = oracle.exponent_moments(s, rho);
                        worst = worst.max((e - oe).abs()).max((v1 - ov1).abs()).max((v2 - ov2).abs());
                        compared += 3;
                    }
                    _ => outside.push((s, gamma, rho)),
                }
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        8,
        worst <= 1e-6 && within(elapsed, 30),
        format!(
            "{compared} displays, max |closed - quadrature| = {worst:.1e}; outside validity (s, G, rho): {outside:?}; {elapsed:.2?}"
        ),
    );
}

#[test]
fn criterion_09_additive_identities() {
    let unit = GaussianSetup::with_snr(1.0).unwrap();
    let value = gauss_additive_worst(&unit, 0.01).unwrap();
    // the hand value ½ ln(1 + 1/1.2) evaluated exactly
    let hand = 0.5 * (11.0f64 / 6.0).ln();
    let mut fixed_gap = 0.0f64;
    let mut m2_gap = 0.0f64;
    for (power, sigma2, mu) in [(1.0, 1.0, 0.0), (2.0, 0.5, 0.3), (0.3, 2.0, -1.0)] {
        let setup = GaussianSetup::new(power, sigma2, mu).unwrap();
        for r in [1e-4, 0.01, 0.05, 0.2] {
            let a = gauss_additive_worst(&setup, r).unwrap();
            fixed_gap = fixed_gap.max((fixed_cost_worst(&setup, r).unwrap() - a).abs());
            let d = worst_noise_chi2(&setup, r).unwrap();
            let target = sigma2 * (1.0 + 2.0 * r.sqrt());
            let half = 12.0 * sigma2.sqrt();
            let quad = common::trapezoid(|z| (z - mu).powi(2) * d.density(z), mu - half, mu + half, 20_000);
            m2_gap = m2_gap.max((d.second_moment - target).abs()).max((quad - target).abs());
        }
    }
    verdict(
        9,
        (value - hand).abs() <= 1e-6 && fixed_gap <= 1e-12 && m2_gap <= 1e-8,
        format!(
            "additive rate {value:.9} (exact 0.5 ln(11/6) = {hand:.9}), fixed-cost gap {fixed_gap:.1e}, second-moment gap {m2_gap:.1e}"
        ),
    );
}

#[test]
fn criterion_10_broken_extremal() {
    let start = Instant::now();
    let setup = GaussianSetup::new(1.0, 1.0, 0.0).unwrap();
    let r = 0.05;
    let d = worst_noise_kl(&setup, r).unwrap();
    let z0 = d.z0().unwrap();
    let (inside, outside) = d.jump().unwrap();
    let jump = (inside - outside).abs() / outside;
    let jump_direct = (d.density(z0 * (1.0 - 1e-12)) - d.density(z0 * (1.0 + 1e-12))).abs() / outside;

    // Inside |z| < z0 the density is N(z; 1)·rho/(z² − lambda) with a pole
    // just past z0; integrate in the distance e = z0 − |z| on a log scale
    // (working with e directly keeps the pole resolvable), outside by Simpson.
    let NoiseShape::BrokenExtremal { u0, delta, rho } = d.shape else { panic!("not a broken extremal") };
    let a = u0 + delta;
    let center = |z: f64| (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let inside = |e: f64| {
        let w = e + delta;
        center(u0 - e) * rho / (-w * (2.0 * a - w))
    };
    let integral = |f: &dyn Fn(f64, f64) -> f64| {
        let inner = common::simpson(|t| f(u0 - t.exp(), inside(t.exp())) * t.exp(), -80.0, u0.ln(), 400_000);
        let outer = common::simpson(|z| f(z, center(z)), u0, 14.0, 400_000);
        2.0 * (inner + outer)
    };
    let mass = integral(&|_, w| w);
    let m2 = integral(&|z, w| z * z * w);
    let kl = integral(&|z, w| center(z) * (center(z) / w).ln());
    assert!((d.density(0.5) - inside(u0 - 0.5)).abs() <= 1e-15 * inside(u0 - 0.5));

    let chi2 = worst_noise_chi2(&setup, r).unwrap();
    let ratio = (d.second_moment - 1.0) / (chi2.second_moment - 1.0);
    let rate_gap = (additive_rate(&setup, d.second_moment) - gauss_additive_worst(&setup, r).unwrap()).abs();
    let elapsed = start.elapsed();
    let checks = [
        ("mass", (mass - 1.0).abs() <= 1e-6),
        ("kl", (kl - r).abs() <= 1e-4 && (d.kl_from_center - r).abs() <= 1e-4),
        ("jump", jump > 1e-6 && jump_direct > 1e-6),
        ("moment", (m2 - d.second_moment).abs() <= 1e-6),
        ("band", (0.8..=1.2).contains(&ratio)),
        ("rate", rate_gap <= 0.01),
        ("time", within(elapsed, 60)),
    ];
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    verdict(
        10,
        failed.is_empty(),
        format!(
            "z0 {z0:.4}, mass {mass:.9}, KL {kl:.6}, jump {jump:.3}, m2 {:.5} (quadrature {m2:.5}), excess ratio vs chi2 {ratio:.3}, rate gap {rate_gap:.4}, {elapsed:.2?}; failing: {failed:?}",
            d.second_moment
        ),
    );
}

#[test]
fn criterion_11_brute_force_oracle() {
    let instances = [
        (vec![0.5, 0.5], [0.1, 0.1], 0.01),
        (vec![0.3, 0.7], [0.2, 0.05], 0.02),
        (vec![0.6, 0.4], [0.15, 0.3], 0.005),
        (vec![0.5, 0.5], [0.05, 0.25], 0.05),
        (vec![0.8, 0.2], [0.3, 0.1], 0.03),
    ];
    let mut worst = 0.0f64;
    let mut lines = Vec::new();
    for (qv, [p0, p1], r) in instances {
        let q = InputDistribution::new(qv.clone()).unwrap();
        let rows = vec![vec![1.0 - p0, p0], vec![p1, 1.0 - p1]];
        let w = DiscreteChannel::new(rows.clone()).unwrap();
        let solver = worst_rate_exact_kl(&q, &BallSpec::kl(w, r).unwrap(), Ensemble::Iid).unwrap().value;
        let brute = common::brute_force_worst_gmi_2x2(&qv, &rows, r, 1e-3);
        worst = worst.max((solver - brute).abs());
        lines.push(format!("{solver:.5}/{brute:.5}"));
    }
    verdict(11, worst <= 2e-3, format!("solver/brute {}; max gap {worst:.1e}", lines.join(" ")));
}
