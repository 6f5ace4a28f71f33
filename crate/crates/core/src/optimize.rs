//! Golden-section search and coarse scans for one-dimensional extrema.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimum of a unimodal `f` on `[a, b]`; returns `(x, f(x))`.
///
/// A minimum sitting on an endpoint is found as well: the bracket
/// collapses onto it.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > xtol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [a, b] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Maximum of a unimodal `f` on `[a, b]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    let (x, neg) = golden_section_min(|x| -f(x), a, b, xtol);
    (x, -neg)
}

/// Result of sampling a function on a uniform grid.
#[derive(Debug, Clone)]
pub struct Scan {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

impl Scan {
    pub fn uniform<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, points: usize) -> Self {
        let n = points.max(2);
        let xs: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
        let values = xs.iter().map(|&x| f(x)).collect();
        Self { xs, values }
    }

    pub fn argmin(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// True when the samples decrease then increase (either part may be
    /// empty), i.e. the sampled sequence has a single valley.
    pub fn is_unimodal_valley(&self) -> bool {
        let mut rising = false;
        for w in self.values.windows(2) {
            if w[1] > w[0] {
                rising = true;
            } else if rising && w[1] < w[0] {
                return false;
            }
        }
        true
    }

    /// Neighbouring grid points around index `i`, clamped to the grid.
    pub fn bracket(&self, i: usize) -> (f64, f64) {
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(self.xs.len() - 1);
        (self.xs[lo], self.xs[hi])
    }
}
