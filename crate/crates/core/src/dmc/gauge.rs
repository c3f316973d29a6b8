use super::InputDistribution;

/// Coordinates on the quotient of tilts `a: X -> R` modulo constants.
///
/// Inputs with `Q(x) = 0` are pinned at zero; the most likely input is the
/// pivot whose entry is solved from `E_Q[a] = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltCoords {
    q: Vec<f64>,
    pivot: usize,
    free: Vec<usize>,
}

impl TiltCoords {
    pub fn new(q: &InputDistribution) -> Self {
        let probs = q.probs();
        let pivot = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let free = (0..probs.len()).filter(|&x| x != pivot && probs[x] > 0.0).collect();
        Self { q: probs.to_vec(), pivot, free }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn expand(&self, coords: &[f64]) -> Vec<f64> {
        let mut a = vec![0.0; self.q.len()];
        let mut acc = 0.0;
        for (&x, &v) in self.free.iter().zip(coords) {
            a[x] = v;
            acc += self.q[x] * v;
        }
        a[self.pivot] = -acc / self.q[self.pivot];
        a
    }

    /// Coordinates of the zero-mean representative of `a`.
    pub fn compress(&self, a: &[f64]) -> Vec<f64> {
        let mean: f64 = self.q.iter().zip(a).map(|(q, v)| q * v).sum();
        self.free.iter().map(|&x| a[x] - mean).collect()
    }
}
