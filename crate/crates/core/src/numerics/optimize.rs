use super::{OptimizerReport, ScalarBracket, Tolerances};

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const GROW: f64 = 1.618_033_988_749_895;

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Golden-section maximization on a closed interval.
///
/// Both endpoints are always evaluated, so maxima on the boundary are found
/// exactly. Among equal values the smallest argument wins. The returned value
/// is the function evaluated at the returned point.
pub fn maximize_unimodal_1d<F: FnMut(f64) -> f64>(mut f: F, bracket: ScalarBracket) -> OptimizerReport {
    let ScalarBracket { lo, hi, tol } = bracket;
    assert!(hi >= lo, "bracket is reversed");
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(64);
    let mut eval = |x: f64, samples: &mut Vec<(f64, f64)>| {
        let v = sanitize(f(x));
        samples.push((x, v));
        v
    };
    eval(lo, &mut samples);
    if hi > lo {
        eval(hi, &mut samples);
    }
    let (mut a, mut c) = (lo, hi);
    let mut iterations = 0;
    if c - a > tol {
        let mut x1 = c - INV_PHI * (c - a);
        let mut x2 = a + INV_PHI * (c - a);
        let mut f1 = eval(x1, &mut samples);
        let mut f2 = eval(x2, &mut samples);
        while c - a > tol && iterations < 500 {
            iterations += 1;
            if f1 >= f2 {
                c = x2;
                x2 = x1;
                f2 = f1;
                x1 = c - INV_PHI * (c - a);
                f1 = eval(x1, &mut samples);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + INV_PHI * (c - a);
                f2 = eval(x2, &mut samples);
            }
        }
    }
    let evaluations = samples.len();
    let (x, v) = best_sample(&samples);
    OptimizerReport {
        point: vec![x],
        value: v,
        iterations,
        evaluations,
        converged: c - a <= tol || hi - lo <= tol,
        unimodality_violation: unimodality_violation(&mut samples),
    }
}

fn best_sample(samples: &[(f64, f64)]) -> (f64, f64) {
    let mut best = samples[0];
    for &(x, v) in &samples[1..] {
        if v > best.1 || (v == best.1 && x < best.0) {
            best = (x, v);
        }
    }
    best
}

fn unimodality_violation(samples: &mut [(f64, f64)]) -> Option<f64> {
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let peak = samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)?;
    let scale = 1.0 + samples[peak].1.abs();
    let mut worst = 0.0f64;
    for w in samples[..=peak].windows(2) {
        worst = worst.max(w[0].1 - w[1].1);
    }
    for w in samples[peak..].windows(2) {
        worst = worst.max(w[1].1 - w[0].1);
    }
    (worst.is_finite() && worst > 1e-9 * scale).then_some(worst)
}

/// Maximize over `[lo, inf)`: start from `[lo, hi]` and double `hi` while
/// the function still increases there.
pub fn maximize_halfline<F: FnMut(f64) -> f64>(mut f: F, bracket: ScalarBracket) -> OptimizerReport {
    const CAP: f64 = 1e6;
    let mut hi = bracket.hi;
    let mut expansions = 0;
    while hi < CAP {
        let h = 1e-6 * hi.max(1.0);
        let (a, b) = (sanitize(f(hi - h)), sanitize(f(hi)));
        if !(b > a) {
            break;
        }
        hi *= 2.0;
        expansions += 1;
    }
    let mut report = maximize_unimodal_1d(&mut f, ScalarBracket::new(bracket.lo, hi, bracket.tol));
    report.evaluations += 2 * (expansions + 1);
    if hi >= CAP {
        report.converged = false;
    }
    report
}

/// Maximize `g(t)` over `[t_min, t_max]` (which contains 0) starting at
/// `t = 0` with trial step `step`. Returns `(t, g(t))`.
pub fn line_maximize<F: FnMut(f64) -> f64>(
    mut g: F,
    t_min: f64,
    t_max: f64,
    step: f64,
    tol: f64,
) -> (f64, f64, usize) {
    let g0 = sanitize(g(0.0));
    let mut evals = 1;
    let step = step.abs().max(tol);
    let forward = step.min(t_max);
    let backward = step.min(-t_min);
    let gf = if forward > 0.0 {
        evals += 1;
        sanitize(g(forward))
    } else {
        f64::NEG_INFINITY
    };
    let (lo, hi) = if gf > g0 {
        let (mut a, mut b, mut fb) = (0.0, forward, gf);
        loop {
            if b >= t_max {
                break (a, t_max);
            }
            let c = (b + GROW * (b - a)).min(t_max);
            let fc = sanitize(g(c));
            evals += 1;
            if fc <= fb {
                break (a, c);
            }
            a = b;
            b = c;
            fb = fc;
        }
    } else {
        let gb = if backward > 0.0 {
            evals += 1;
            sanitize(g(-backward))
        } else {
            f64::NEG_INFINITY
        };
        if gb > g0 {
            let (mut a, mut b, mut fb) = (0.0, -backward, gb);
            loop {
                if b <= t_min {
                    break (t_min, a);
                }
                let c = (b - GROW * (a - b)).max(t_min);
                let fc = sanitize(g(c));
                evals += 1;
                if fc <= fb {
                    break (c, a);
                }
                a = b;
                b = c;
                fb = fc;
            }
        } else {
            (-backward, forward)
        }
    };
    let r = maximize_unimodal_1d(&mut g, ScalarBracket::new(lo, hi, tol));
    evals += r.evaluations;
    if r.value >= g0 {
        (r.point[0], r.value, evals)
    } else {
        (0.0, g0, evals)
    }
}

/// Coordinate ascent with a pattern move after every sweep.
///
/// `bounds[i]` is the admissible interval of coordinate `i` (infinite ends
/// allowed). Stops once a full sweep improves the value by less than
/// `tol.value`.
pub fn maximize_multid<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    bounds: &[(f64, f64)],
    tol: &Tolerances,
) -> OptimizerReport {
    let n = start.len();
    assert_eq!(bounds.len(), n);
    let mut x: Vec<f64> = start
        .iter()
        .zip(bounds)
        .map(|(&v, &(l, u))| v.clamp(l, u))
        .collect();
    let mut fx = sanitize(f(&x));
    let mut evaluations = 1;
    let mut steps = vec![0.25; n];
    let mut sweeps = 0;
    let mut converged = false;
    let mut trial = x.clone();
    while sweeps < tol.max_sweeps {
        sweeps += 1;
        let x_start = x.clone();
        let f_start = fx;
        for i in 0..n {
            let (l, u) = bounds[i];
            let xi = x[i];
            let (t, v, e) = line_maximize(
                |t| {
                    trial.copy_from_slice(&x);
                    trial[i] = xi + t;
                    f(&trial)
                },
                l - xi,
                u - xi,
                steps[i],
                tol.argument,
            );
            evaluations += e;
            if v > fx {
                x[i] = (xi + t).clamp(l, u);
                fx = v;
                steps[i] = (2.0 * t.abs()).clamp(1e-4, 4.0);
            } else {
                steps[i] = (0.5 * steps[i]).max(1e-4);
            }
        }
        // pattern move along the net displacement of this sweep
        let d: Vec<f64> = x.iter().zip(&x_start).map(|(a, b)| a - b).collect();
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 1 && norm > 0.0 {
            let (mut tmin, mut tmax) = (f64::NEG_INFINITY, f64::INFINITY);
            for i in 0..n {
                if d[i] != 0.0 {
                    let (a, b) = ((bounds[i].0 - x[i]) / d[i], (bounds[i].1 - x[i]) / d[i]);
                    tmin = tmin.max(a.min(b));
                    tmax = tmax.min(a.max(b));
                }
            }
            let base = x.clone();
            let (t, v, e) = line_maximize(
                |t| {
                    for i in 0..n {
                        trial[i] = (base[i] + t * d[i]).clamp(bounds[i].0, bounds[i].1);
                    }
                    f(&trial)
                },
                tmin.min(0.0),
                tmax.max(0.0),
                1.0,
                tol.argument / norm,
            );
            evaluations += e;
            if v > fx {
                for i in 0..n {
                    x[i] = (base[i] + t * d[i]).clamp(bounds[i].0, bounds[i].1);
                }
                fx = v;
            }
        }
        if fx - f_start < tol.value {
            converged = true;
            break;
        }
    }
    // report the value at the returned point exactly
    let value = sanitize(f(&x));
    OptimizerReport {
        point: x,
        value,
        iterations: sweeps,
        evaluations: evaluations + 1,
        converged,
        unimodality_violation: None,
    }
}
