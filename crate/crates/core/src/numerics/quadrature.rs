use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss 7-point weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive G7/K15 quadrature on a finite interval. Converged when
/// the error estimate is below `tol * max(1, |value|)`.
pub fn integrate_1d<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0 });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, error: e });
    let (mut total, mut err) = (v, e);
    for _ in 0..4000 {
        if !total.is_finite() {
            break;
        }
        if err <= tol * total.abs().max(1.0) {
            return Ok(Quadrature { value: total, error: err });
        }
        let p = heap.pop().expect("heap is never empty");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            heap.push(p);
            break;
        }
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Piece { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, error: e2 });
    }
    // recompute sums to shed accumulated cancellation before judging
    let total: f64 = heap.iter().map(|p| p.value).sum();
    let err: f64 = heap.iter().map(|p| p.error).sum();
    if total.is_finite() && err <= tol * total.abs().max(1.0) {
        Ok(Quadrature { value: total, error: err })
    } else {
        Err(Error::ToleranceNotReached { estimate: total, error: err })
    }
}

/// Normal weight `N(mean, var)`, truncated at ten standard deviations when
/// integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianWeight {
    pub mean: f64,
    pub var: f64,
}

impl GaussianWeight {
    pub fn new(mean: f64, var: f64) -> Self {
        Self { mean, var }
    }

    pub fn density(&self, x: f64) -> f64 {
        let d = x - self.mean;
        (-0.5 * d * d / self.var).exp() / (2.0 * std::f64::consts::PI * self.var).sqrt()
    }

    pub fn range(&self) -> (f64, f64) {
        let w = 10.0 * self.var.sqrt();
        (self.mean - w, self.mean + w)
    }
}

/// `∫∫ N(x; wx) N(y; wy) g(x, y) dy dx` by nested adaptive quadrature.
pub fn integrate_2d_gaussian_weighted<G: FnMut(f64, f64) -> f64>(
    mut g: G,
    wx: GaussianWeight,
    wy: GaussianWeight,
    tol: f64,
) -> Result<Quadrature> {
    let (xa, xb) = wx.range();
    let (ya, yb) = wy.range();
    let failure: Cell<Option<Error>> = Cell::new(None);
    let inner_err = Cell::new(0.0f64);
    let outer = integrate_1d(
        |x| {
            match integrate_1d(|y| wy.density(y) * g(x, y), ya, yb, tol) {
                Ok(q) => {
                    inner_err.set(inner_err.get().max(q.error));
                    wx.density(x) * q.value
                }
                Err(e) => {
                    failure.set(Some(e));
                    f64::NAN
                }
            }
        },
        xa,
        xb,
        tol,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let q = outer?;
    Ok(Quadrature { value: q.value, error: q.error + inner_err.get() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let q = integrate_1d(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-13).unwrap();
        assert!((q.value - (64.0 / 6.0 - 1.0 / 6.0 - 9.0)).abs() < 1e-12);
    }

    #[test]
    fn gaussian_moments() {
        let w = GaussianWeight::new(0.5, 2.0);
        let (a, b) = w.range();
        let m0 = integrate_1d(|x| w.density(x), a, b, 1e-12).unwrap().value;
        let m2 = integrate_1d(|x| x * x * w.density(x), a, b, 1e-12).unwrap().value;
        assert!((m0 - 1.0).abs() < 1e-12);
        assert!((m2 - 2.25).abs() < 1e-11);
    }

    #[test]
    fn log_singularity() {
        let q = integrate_1d(|x: f64| x.ln(), 0.0, 1.0, 1e-10).unwrap();
        assert!((q.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_dimensional() {
        let q = integrate_2d_gaussian_weighted(
            |x, y| (x + y).powi(2),
            GaussianWeight::new(0.0, 1.0),
            GaussianWeight::new(1.0, 0.5),
            1e-11,
        )
        .unwrap();
        assert!((q.value - 2.5).abs() < 1e-9);
    }

    #[test]
    fn reports_failure() {
        let e = integrate_1d(|x: f64| 1.0 / x, 0.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(e, Error::ToleranceNotReached { .. }));
    }
}
