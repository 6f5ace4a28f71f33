//! Gamma at half-integers, round sphere volumes and the sine-power integral
//! `∫₀^y sin^m(s) ds`.

use std::f64::consts::{FRAC_PI_4, PI};

/// Γ(n/2) for a positive integer `n`, by the exact recursion
/// Γ(x + 1) = x Γ(x) started from Γ(1/2) = √π and Γ(1) = 1.
pub fn gamma_half(n: u32) -> f64 {
    assert!(n > 0, "gamma_half requires n >= 1");
    let (mut x, mut g) = if n.is_multiple_of(2) { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    let target = f64::from(n) / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    g
}

/// Volume of the unit round `n`-sphere, 2π^{(n+1)/2} / Γ((n+1)/2).
pub fn sphere_volume(n: u32) -> f64 {
    2.0 * PI.powf((f64::from(n) + 1.0) / 2.0) / gamma_half(n + 1)
}

/// Volume of the unit Euclidean `n`-ball.
pub fn ball_volume(n: u32) -> f64 {
    sphere_volume(n - 1) / f64::from(n)
}

/// Wallis integral `∫₀^{π/2} sin^m`.
pub fn wallis(m: u32) -> f64 {
    PI.sqrt() * gamma_half(m + 1) / (2.0 * gamma_half(m + 2))
}

/// `∫₀^y sin^m(s) ds` for `y ∈ [0, π]`.
///
/// Below π/4 the closed-form recurrence loses relative accuracy (its terms
/// are O(y^{m-1}) while the result is O(y^{m+1})), so the incomplete-beta
/// series in `sin² y` is used there instead.
pub fn sin_power_integral(m: u32, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    if y <= FRAC_PI_4 {
        sin_power_series(m, y)
    } else {
        sin_power_recurrence(m, y)
    }
}

/// ½ B(sin² y; (m+1)/2, 1/2) expanded as a power series, valid for y ≤ π/2.
fn sin_power_series(m: u32, y: f64) -> f64 {
    let s = y.sin();
    let x = s * s;
    let a = (f64::from(m) + 1.0) / 2.0;
    // (1/2)_n / n!
    let mut coeff = 1.0;
    let mut xn = 1.0;
    let mut sum = 0.0;
    for n in 0..400 {
        let nf = f64::from(n);
        let term = coeff * xn / (a + nf);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        coeff *= (nf + 0.5) / (nf + 1.0);
        xn *= x;
    }
    // x^a = sin^{m+1}(y)
    0.5 * s.powi(m as i32 + 1) * sum
}

/// I_m = -sin^{m-1} cos / m + (m-1)/m I_{m-2}, with I_0 = y, I_1 = 1 - cos y.
fn sin_power_recurrence(m: u32, y: f64) -> f64 {
    let (s, c) = y.sin_cos();
    let half = (y / 2.0).sin();
    let mut prev = if m.is_multiple_of(2) { y } else { 2.0 * half * half };
    let mut j = if m.is_multiple_of(2) { 2 } else { 3 };
    while j <= m {
        let jf = f64::from(j);
        prev = -s.powi(j as i32 - 1) * c / jf + (jf - 1.0) / jf * prev;
        j += 2;
    }
    prev
}
