//! One-dimensional quadrature: globally adaptive Gauss–Kronrod (7/15) and
//! tanh-sinh (double exponential).
//!
//! The two rules share nothing but the integrand, which is what makes them
//! usable as cross-checks of each other.

use crate::error::{Error, Result};

/// Requested accuracy of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::relative(1e-10)
    }
}

/// Value together with the rule's own error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

// 15-point Kronrod nodes and weights, copied verbatim from the published tables
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive Gauss–Kronrod quadrature of `f` over `[a, b]`.
///
/// The interval with the largest error estimate is bisected until the
/// summed estimate meets `tol`. Endpoints are never evaluated.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    const MAX_INTERVALS: usize = 2000;
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let (v, e) = gk15(&f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    let mut value = v;
    let mut error = e;
    let mut evaluations = 15;
    while !(error <= tol.target(value)) || !value.is_finite() {
        if intervals.len() >= MAX_INTERVALS || !error.is_finite() || !value.is_finite() {
            return Err(Error::QuadratureNonConvergence { a, b, error, evaluations });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, v0, e0) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (vl, el) = gk15(&f, lo, mid);
        let (vr, er) = gk15(&f, mid, hi);
        evaluations += 30;
        value += vl + vr - v0;
        error += el + er - e0;
        intervals.push((lo, mid, vl, el));
        intervals.push((mid, hi, vr, er));
    }
    // re-sum to shed the drift of the running updates
    let value = intervals.iter().map(|iv| iv.2).sum();
    let error = intervals.iter().map(|iv| iv.3).sum();
    Ok(Estimate { value, error, evaluations })
}

/// Tanh-sinh quadrature of `f` over `[a, b]`.
///
/// The integrand receives `(x, x - a, b - x)`; the two distances are computed
/// without cancellation, so integrands singular at an endpoint can be written
/// in terms of the exact gap.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    use std::f64::consts::FRAC_PI_2;
    const MAX_LEVEL: u32 = 12;
    const T_MAX: f64 = 6.5;
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let width = b - a;
    let half = 0.5 * width;

    // Sum over nodes t = j*h for j in `js` (both signs), without the step factor.
    let level_sum = |h: f64, step: usize, start: usize, count: &mut usize| -> f64 {
        let mut sum = 0.0;
        let mut j = start;
        loop {
            let t = j as f64 * h;
            if t > T_MAX {
                break;
            }
            let u = FRAC_PI_2 * t.sinh();
            let cosh_u = u.cosh();
            let w = FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
            // distance of the node from the nearer endpoint: half * (1 - tanh u)
            let d = half * 2.0 / (1.0 + (2.0 * u).exp());
            if d <= 0.0 || w == 0.0 {
                break;
            }
            if j == 0 {
                sum += w * f(a + half, half, half);
            } else {
                sum += w * (f(a + d, d, width - d) + f(b - d, width - d, d));
                *count += 1;
            }
            *count += 1;
            j += step;
        }
        sum
    };

    let mut evaluations = 0;
    let mut h = 1.0;
    let mut sum = level_sum(h, 1, 0, &mut evaluations);
    let mut value = half * h * sum;
    for _ in 0..MAX_LEVEL {
        h *= 0.5;
        sum += level_sum(h, 2, 1, &mut evaluations);
        let next = half * h * sum;
        let error = (next - value).abs();
        value = next;
        if error <= tol.target(value) {
            return Ok(Estimate { value, error, evaluations });
        }
    }
    Err(Error::QuadratureNonConvergence {
        a,
        b,
        error: f64::NAN,
        evaluations,
    })
}
