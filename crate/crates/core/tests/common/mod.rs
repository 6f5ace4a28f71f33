//! Independent oracles for the integration tests. Nothing here calls the
//! library: sphere constants come from closed forms, ball-type regions from
//! a plain composite Simpson rule.
#![allow(dead_code)]

use std::f64::consts::PI;

/// `Γ(n/2)` by the half-integer recursion.
pub fn gamma_half(n: u32) -> f64 {
    let (mut g, mut m) = if n.is_multiple_of(2) { (1.0, 2) } else { (PI.sqrt(), 1) };
    while m < n {
        g *= m as f64 / 2.0;
        m += 2;
    }
    g
}

/// Volume of the unit round `S^n`.
pub fn sphere_volume(n: u32) -> f64 {
    2.0 * PI.powf((n as f64 + 1.0) / 2.0) / gamma_half(n + 1)
}

/// `Vol(S^{n-1}) / (Vol(S^{n-1})/n)^{(n-1)/n}`.
pub fn euclidean_constant(n: u32) -> f64 {
    let s = sphere_volume(n - 1);
    s / (s / n as f64).powf((n as f64 - 1.0) / n as f64)
}

/// `∫_0^y sin^m`: Gauss–Legendre for `y < 1`, where the reduction formula
/// cancels catastrophically, and the reduction formula otherwise.
pub fn sin_power_integral(m: u32, y: f64) -> f64 {
    if y < 1.0 {
        let (x, w) = gauss_legendre_16();
        let half = 0.5 * y;
        return half * x.iter().zip(w).map(|(&t, &wt)| wt * (half * (t + 1.0)).sin().powi(m as i32)).sum::<f64>();
    }
    reduction(m, y)
}

fn reduction(m: u32, y: f64) -> f64 {
    match m {
        0 => y,
        1 => 1.0 - y.cos(),
        _ => {
            let m_f = m as f64;
            -y.sin().powi(m as i32 - 1) * y.cos() / m_f + (m_f - 1.0) / m_f * reduction(m - 2, y)
        }
    }
}

/// Nodes and weights of the 16-point Gauss–Legendre rule on [-1, 1], by
/// Newton iteration on the Legendre polynomial.
fn gauss_legendre_16() -> &'static ([f64; 16], [f64; 16]) {
    static RULE: std::sync::OnceLock<([f64; 16], [f64; 16])> = std::sync::OnceLock::new();
    RULE.get_or_init(|| {
        const N: usize = 16;
        let (mut x, mut w) = ([0.0; N], [0.0; N]);
        for i in 0..N {
            let mut t = (PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, t);
                for n in 2..=N {
                    let nf = n as f64;
                    let p2 = ((2.0 * nf - 1.0) * t * p1 - (nf - 1.0) * p0) / nf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N as f64 * (t * p1 - p0) / (t * t - 1.0);
                let step = p1 / dp;
                t -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
        (x, w)
    })
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// `(area, volume)` of the ball-type region of unit `S^k × ℝ` with maximal
/// slice radius `eta`, substituting `y = eta (1 - s²)` to tame the inverse
/// square root at `y = eta`.
pub fn pedrosa_region(k: u32, eta: f64) -> (f64, f64) {
    let cap = |y: f64| sin_power_integral(k - 1, y);
    let h = |y: f64| y.sin().powi(k as i32 - 1) / cap(y);
    let h_eta = h(eta);
    let pre = 2.0 * sphere_volume(k - 1);
    let integrand = |s: f64, vol: bool| {
        let y = eta * (1.0 - s * s);
        if y <= 0.0 || s == 0.0 {
            // limit s -> 0: 2 eta s / sqrt(1 - u²) tends to 2 eta / sqrt(2 kappa eta)
            if s == 0.0 {
                let kappa = h_eta - (k as f64 - 1.0) / eta.tan();
                let lim = 2.0 * eta / (2.0 * kappa * eta).sqrt();
                return lim * if vol { cap(eta) } else { eta.sin().powi(k as i32 - 1) };
            }
            return 0.0;
        }
        let u = h_eta / h(y);
        let w = (1.0 - u * u).max(0.0);
        let jac = 2.0 * eta * s;
        let f = if vol { cap(y) * u } else { y.sin().powi(k as i32 - 1) };
        jac * f / w.sqrt()
    };
    let n = 4_000;
    let area = pre * simpson(|s| integrand(s, false), 0.0, 1.0, n);
    let volume = pre * simpson(|s| integrand(s, true), 0.0, 1.0, n);
    (area, volume)
}

/// Radius where the ball-type area reaches `2 Vol(S^k)`.
pub fn pedrosa_eta_star(k: u32) -> f64 {
    let target = 2.0 * sphere_volume(k);
    let (mut lo, mut hi) = (0.05, 0.05);
    while pedrosa_region(k, hi).0 < target {
        lo = hi;
        hi += 0.05;
    }
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if pedrosa_region(k, mid).0 < target { lo = mid } else { hi = mid }
    }
    0.5 * (lo + hi)
}

/// Isoperimetric profile of `(S^k × ℝ, mu(g0 + dx²))` by bisection on the
/// region volume, the slab area past the crossover and the scaling law.
pub fn pedrosa_profile(k: u32, mu: f64, v: f64) -> f64 {
    let kf = k as f64;
    let v1 = v * mu.powf(-(kf + 1.0) / 2.0);
    let eta_star = pedrosa_eta_star(k);
    let area = if v1 >= pedrosa_region(k, eta_star).1 {
        2.0 * sphere_volume(k)
    } else {
        let (mut lo, mut hi) = (1e-9, eta_star);
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if pedrosa_region(k, mid).1 < v1 { lo = mid } else { hi = mid }
        }
        pedrosa_region(k, 0.5 * (lo + hi)).0
    };
    mu.powf(kf / 2.0) * area
}

/// Profile of the round `(S^d, mu g0)` by bisection on the geodesic radius.
pub fn sphere_profile(d: u32, mu: f64, v: f64) -> f64 {
    let s = sphere_volume(d - 1);
    let scale = mu.powf(d as f64 / 2.0);
    let (mut lo, mut hi) = (0.0, PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if scale * s * sin_power_integral(d - 1, mid) < v { lo = mid } else { hi = mid }
    }
    mu.powf((d as f64 - 1.0) / 2.0) * s * (0.5 * (lo + hi)).sin().powi(d as i32 - 1)
}
