//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the library's numerics.

#![allow(dead_code)]

use mismatch_ball::dmc::{DiscreteChannel, InputDistribution};
use rand::Rng;

pub fn rows(w: &DiscreteChannel) -> Vec<Vec<f64>> {
    w.to_rows()
}

/// `i_{s,a}(x,y) = ln Ŵ^s e^{a(x)} − ln Σ_x' Q Ŵ^s e^{a(x')}`, by direct sums.
pub fn info_density(q: &[f64], w: &[Vec<f64>], s: f64, a: &[f64]) -> Vec<Vec<f64>> {
    let ny = w[0].len();
    let den: Vec<f64> = (0..ny)
        .map(|y| (0..q.len()).map(|x| q[x] * w[x][y].powf(s) * a[x].exp()).sum::<f64>().ln())
        .collect();
    (0..q.len())
        .map(|x| (0..ny).map(|y| s * w[x][y].ln() + a[x] - den[y]).collect())
        .collect()
}

pub fn mean(q: &[f64], w: &[Vec<f64>], f: &[Vec<f64>]) -> f64 {
    (0..q.len()).map(|x| q[x] * (0..w[x].len()).map(|y| w[x][y] * f[x][y]).sum::<f64>()).sum()
}

/// `E_Q[Var_W[f | X]]`.
pub fn cond_var(q: &[f64], w: &[Vec<f64>], f: &[Vec<f64>]) -> f64 {
    (0..q.len())
        .map(|x| {
            let m: f64 = (0..w[x].len()).map(|y| w[x][y] * f[x][y]).sum();
            q[x] * (0..w[x].len()).map(|y| w[x][y] * (f[x][y] - m).powi(2)).sum::<f64>()
        })
        .sum()
}

/// `ε = (Σ_x' Q Ŵ^s e^{a(x')} / (Ŵ^s e^{a(x)}))^ρ`.
pub fn exponent_density(q: &[f64], w: &[Vec<f64>], s: f64, a: &[f64], rho: f64) -> Vec<Vec<f64>> {
    info_density(q, w, s, a).into_iter().map(|row| row.into_iter().map(|i| (-rho * i).exp()).collect()).collect()
}

pub fn gmi_at(q: &[f64], metric: &[Vec<f64>], channel: &[Vec<f64>], s: f64) -> f64 {
    mean(q, channel, &info_density(q, metric, s, &vec![0.0; q.len()]))
}

/// `sup_s E_{Q×W}[i_s]` by golden section on `[0, 60]` (the objective is
/// concave in `s`).
pub fn gmi(q: &[f64], metric: &[Vec<f64>], channel: &[Vec<f64>]) -> f64 {
    golden_max(|s| gmi_at(q, metric, channel, s), 0.0, 60.0).1
}

pub fn golden_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-11 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x).max(f(0.0));
    (x, fx)
}

pub fn mutual_information(q: &[f64], w: &[Vec<f64>]) -> f64 {
    let ny = w[0].len();
    let py: Vec<f64> = (0..ny).map(|y| (0..q.len()).map(|x| q[x] * w[x][y]).sum()).collect();
    (0..q.len())
        .map(|x| {
            q[x] * (0..ny).filter(|&y| w[x][y] > 0.0).map(|y| w[x][y] * (w[x][y] / py[y]).ln()).sum::<f64>()
        })
        .sum()
}

/// `D(Ŵ ‖ W | Q)`.
pub fn kl_cond(q: &[f64], center: &[Vec<f64>], w: &[Vec<f64>]) -> f64 {
    (0..q.len())
        .map(|x| q[x] * (0..w[x].len()).map(|y| center[x][y] * (center[x][y] / w[x][y]).ln()).sum::<f64>())
        .sum()
}

/// `½ Σ Q (W − Ŵ)² / Ŵ`.
pub fn chi2_cond(q: &[f64], center: &[Vec<f64>], w: &[Vec<f64>]) -> f64 {
    0.5 * (0..q.len())
        .map(|x| q[x] * (0..w[x].len()).map(|y| (w[x][y] - center[x][y]).powi(2) / center[x][y]).sum::<f64>())
        .sum::<f64>()
}

/// Matched iid Gallager function `−ln Σ_y (Σ_x Q W^{1/(1+ρ)})^{1+ρ}`.
pub fn gallager_e0(q: &[f64], w: &[Vec<f64>], rho: f64) -> f64 {
    let ny = w[0].len();
    -(0..ny)
        .map(|y| (0..q.len()).map(|x| q[x] * w[x][y].powf(1.0 / (1.0 + rho))).sum::<f64>().powf(1.0 + rho))
        .sum::<f64>()
        .ln()
}

fn binary_kl(p: f64, q: f64) -> f64 {
    let t = |a: f64, b: f64| if a > 0.0 { a * (a / b).ln() } else { 0.0 };
    t(p, q) + t(1.0 - p, 1.0 - q)
}

/// Dense search for `min_W GMI(W)` over 2×2 channels on the sphere
/// `D(Ŵ‖W|Q) = r`: row 0 on a grid of step `step`, row 1 solved by bisection
/// on both sides of the center.
pub fn brute_force_worst_gmi_2x2(q: &[f64], center: &[Vec<f64>], r: f64, step: f64) -> f64 {
    let c0 = center[0][1];
    let c1 = center[1][1];
    let mut best = f64::INFINITY;
    let n = (1.0 / step).round() as usize;
    for k in 1..n {
        let w0 = k as f64 * step;
        let used = q[0] * binary_kl(1.0 - c0, 1.0 - w0);
        if used > r {
            continue;
        }
        let target = (r - used) / q[1];
        for side in [-1.0, 1.0] {
            let (mut lo, mut hi) = if side < 0.0 { (1e-15, c1) } else { (c1, 1.0 - 1e-15) };
            // d(w1) = KL(center row ‖ w1) is monotone away from c1
            let d = |w1: f64| binary_kl(c1, w1) - target;
            if d(if side < 0.0 { lo } else { hi }) < 0.0 {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let inside = d(mid) < 0.0;
                match (side < 0.0, inside) {
                    (true, true) | (false, false) => hi = mid,
                    _ => lo = mid,
                }
            }
            let w1 = 0.5 * (lo + hi);
            let w = vec![vec![1.0 - w0, w0], vec![1.0 - w1, w1]];
            best = best.min(gmi(q, center, &w));
        }
    }
    best
}

pub fn random_simplex(rng: &mut impl Rng, n: usize, floor: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| floor + rng.gen::<f64>()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

pub fn random_instance(rng: &mut impl Rng, nx: usize, ny: usize) -> (InputDistribution, DiscreteChannel) {
    let q = InputDistribution::new(random_simplex(rng, nx, 0.2)).unwrap();
    let w = DiscreteChannel::new((0..nx).map(|_| random_simplex(rng, ny, 0.05)).collect()).unwrap();
    (q, w)
}

/// Trapezoid sums over `X ~ N(0, P)`, `Z ~ N(0, 1)` with `Y = X + Z`, for the
/// nearest-neighbor metric `Ŵ(y|x) = N(y − x; 1)` and cost tilt `λ x²`.
pub struct GaussOracle {
    power: f64,
    h: f64,
    xs: Vec<f64>,
    wx: Vec<f64>,
    zs: Vec<f64>,
    wz: Vec<f64>,
}

impl GaussOracle {
    pub fn new(power: f64, z_half_width: f64, h: f64) -> Self {
        let sd = power.sqrt();
        let nx = (10.0 * sd / h).ceil() as i64;
        let nz = (z_half_width / h).ceil() as i64;
        let xs: Vec<f64> = (-nx..=nx).map(|k| k as f64 * h).collect();
        let zs: Vec<f64> = (-nz..=nz).map(|k| k as f64 * h).collect();
        let gauss = |v: f64, var: f64| (-0.5 * v * v / var).exp() / (2.0 * std::f64::consts::PI * var).sqrt();
        let wx = xs.iter().map(|&x| h * gauss(x, power)).collect();
        let wz = zs.iter().map(|&z| h * gauss(z, 1.0)).collect();
        Self { power, h, xs, wx, zs, wz }
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    /// `ln E_{X'}[exp(−s(y−X')²/2 + λX'²)]` by the same trapezoid rule.
    fn log_partition(&self, y: f64, s: f64, lambda: f64) -> f64 {
        let terms: Vec<f64> = self
            .xs
            .iter()
            .zip(&self.wx)
            .map(|(&x, &w)| w.ln() - 0.5 * s * (y - x).powi(2) + lambda * x * x)
            .collect();
        let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
    }

    /// Log partition on the lattice of `y = x + z` values (shared step).
    fn partition_table(&self, s: f64, lambda: f64) -> (f64, Vec<f64>) {
        let y0 = self.xs[0] + self.zs[0];
        let n = self.xs.len() + self.zs.len() - 1;
        let table = (0..n).map(|k| self.log_partition(y0 + k as f64 * self.h, s, lambda)).collect();
        (y0, table)
    }

    /// Calls `f(x_weight, z_weight, log density)` with `log density = i` over
    /// the whole grid.
    fn for_each(&self, s: f64, lambda: f64, mut f: impl FnMut(usize, f64, f64)) {
        let (_, table) = self.partition_table(s, lambda);
        for (i, &x) in self.xs.iter().enumerate() {
            for (j, &z) in self.zs.iter().enumerate() {
                let info = -0.5 * s * z * z + lambda * x * x - table[i + j];
                f(i, self.wz[j], info);
            }
        }
    }

    /// `(I^ML, V)` for the cost-tilted metric; `λ = 0` is the GMI.
    pub fn rate_moments(&self, s: f64, lambda: f64) -> (f64, f64) {
        let nx = self.xs.len();
        let mut m1 = vec![0.0; nx];
        let mut m2 = vec![0.0; nx];
        self.for_each(s, lambda, |i, wz, info| {
            m1[i] += wz * info;
            m2[i] += wz * info * info;
        });
        let ml: f64 = (0..nx).map(|i| self.wx[i] * m1[i]).sum();
        let v: f64 = (0..nx).map(|i| self.wx[i] * (m2[i] - m1[i] * m1[i])).sum();
        (ml, v)
    }

    /// `(E^ML, V₁, V₂)` for `ε = e^{−ρ i}`.
    pub fn exponent_moments(&self, s: f64, rho: f64) -> (f64, f64, f64) {
        let nx = self.xs.len();
        let mut m1 = vec![0.0; nx];
        let mut m2 = vec![0.0; nx];
        self.for_each(s, 0.0, |i, wz, info| {
            let e = (-rho * info).exp();
            m1[i] += wz * e;
            m2[i] += wz * e * e;
        });
        let e1: f64 = (0..nx).map(|i| self.wx[i] * m1[i]).sum();
        let e2: f64 = (0..nx).map(|i| self.wx[i] * m2[i]).sum();
        let c2: f64 = (0..nx).map(|i| self.wx[i] * m1[i] * m1[i]).sum();
        (-e1.ln(), e2 / (e1 * e1), c2 / (e1 * e1))
    }
}

/// Trapezoid rule on `[a, b]` with `n` panels.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + k as f64 * h)).sum();
    h * (inner + 0.5 * (f(a) + f(b)))
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    h / 3.0 * (inner + f(a) + f(b))
}

pub fn rows_of(t: &mismatch_ball::dmc::Table) -> Vec<Vec<f64>> {
    (0..t.nx()).map(|x| t.row(x).to_vec()).collect()
}
