use super::{DiscreteChannel, InputDistribution};
use crate::error::Result;

/// `Σ Q(x) Σ_y w log(w / p)`, i.e. `D(w‖p|Q)`. Returns `f64::INFINITY` when
/// `p` vanishes somewhere `w` does not.
pub fn kl_cond(q: &InputDistribution, p: &DiscreteChannel, w: &DiscreteChannel) -> Result<f64> {
    p.check_input(q)?;
    p.check_same_shape(w)?;
    let mut acc = 0.0;
    for (x, &qx) in q.probs().iter().enumerate() {
        if qx == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for (&wy, &py) in w.row(x).iter().zip(p.row(x)) {
            if wy > 0.0 {
                if py <= 0.0 {
                    return Ok(f64::INFINITY);
                }
                row += wy * (wy / py).ln();
            }
        }
        acc += qx * row;
    }
    Ok(acc.max(0.0))
}

/// `½ Σ Q(x) Σ_y (p − w)² / w`.
pub fn chi2_cond(q: &InputDistribution, p: &DiscreteChannel, w: &DiscreteChannel) -> Result<f64> {
    p.check_input(q)?;
    p.check_same_shape(w)?;
    w.require_positive()?;
    Ok(0.5 * super::density::expect(q, w, |x, y| {
        let d = p.get(x, y) - w.get(x, y);
        d * d / (w.get(x, y) * w.get(x, y))
    }))
}
