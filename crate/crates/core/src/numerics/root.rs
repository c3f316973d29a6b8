use super::ScalarBracket;
use crate::error::{Error, Result};

/// Brent's method. Stops when `|f| <= bracket.tol` or the bracket has
/// shrunk to a few ulps.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: ScalarBracket) -> Result<f64> {
    let ScalarBracket { lo, hi, tol } = bracket;
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() || fa * fb > 0.0 {
        return Err(Error::NoSignChange { lo, hi, f_lo: fa, f_hi: fb });
    }
    if fa.abs() <= tol && fa.abs() <= fb.abs() {
        return Ok(a);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..300 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let xtol = 2.0 * f64::EPSILON * b.abs() + 1e-300;
        let m = 0.5 * (c - b);
        if fb.abs() <= tol || m.abs() <= xtol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= xtol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (xtol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > xtol { d } else { xtol.copysign(m) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::RootBracketFailure(format!("function returned NaN at {b}")));
        }
    }
    Err(Error::RootBracketFailure("Brent iteration limit".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_root() {
        let r = find_root(|x| x * x * x - 2.0, ScalarBracket::new(0.0, 4.0, 1e-14)).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change() {
        let e = find_root(|x| x * x + 1.0, ScalarBracket::new(-1.0, 1.0, 1e-12)).unwrap_err();
        assert!(matches!(e, Error::NoSignChange { .. }));
    }

    #[test]
    fn endpoint_root() {
        let r = find_root(|x| x, ScalarBracket::new(0.0, 1.0, 1e-12)).unwrap();
        assert_eq!(r, 0.0);
    }
}
