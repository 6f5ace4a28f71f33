//! Isoperimetric profile of the cylinders `(S^k × ℝ, μ(g₀ + dx²))`.
//!
//! Minimizers are either cylindrical sections `S^k × [a, b]` (boundary
//! `2 V_k`, any volume) or ball-type regions whose slices are geodesic balls
//! of radius at most `η`. For a ball-type region, with
//! `h(y) = sin^{k-1}(y) / ∫₀^y sin^{k-1}` and `u(η, y) = h(η) / h(y)`:
//!
//! ```text
//! A(η) = 2 V_{k-1} ∫₀^η sin^{k-1}(y) / √(1 - u²) dy
//! V(η) = 2 V_{k-1} ∫₀^η (∫₀^y sin^{k-1}) u / √(1 - u²) dy
//! ```
//!
//! Both integrands blow up like `(η - y)^{-1/2}` at `y = η`. The primary
//! route substitutes `y = η - t²`, which leaves a bounded integrand for
//! Gauss–Kronrod; the cross-check integrates the original form with
//! tanh-sinh.
//!
//! The ball family is only ever used on `(0, η*]`, where `η*` is the radius
//! at which `A(η*) = 2 V_k`; past the matching volume `v₀ = V(η*)` the
//! cylindrical section wins.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{invalid, Error, Result};
use crate::quad::{gauss_kronrod, tanh_sinh, Tolerance};
use crate::roots::brent;
use crate::special::{sin_power_integral, sphere_volume};

/// Below this radius the Euclidean-ball asymptotics replace quadrature.
pub const TINY_ETA: f64 = 1e-4;

/// Relative gap `(η - y)/η` under which `1 - u²` is linearized.
const LINEARIZE_GAP: f64 = 1e-7;
/// Below this `y` the quotient in `u` is replaced by its series.
const SMALL_Y: f64 = 1e-4;

/// A scaled cylinder `(S^k × ℝ, mu (g₀ + dx²))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCylinder")]
pub struct CylinderSpec {
    k: u32,
    mu: f64,
}

#[derive(Deserialize)]
struct RawCylinder {
    k: i64,
    mu: f64,
}

impl TryFrom<RawCylinder> for CylinderSpec {
    type Error = Error;

    fn try_from(raw: RawCylinder) -> Result<Self> {
        Self::new(raw.k, raw.mu)
    }
}

impl CylinderSpec {
    pub fn new(k: i64, mu: f64) -> Result<Self> {
        check_k(k)?;
        if !(mu > 0.0 && mu.is_finite()) {
            return invalid(format!("metric scale must be positive, got {mu}"));
        }
        Ok(Self { k: k as u32, mu })
    }

    pub fn unit(k: i64) -> Result<Self> {
        Self::new(k, 1.0)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Manifold dimension `k + 1`.
    pub fn dim(&self) -> u32 {
        self.k + 1
    }
}

fn check_k(k: i64) -> Result<u32> {
    if !(2..=64).contains(&k) {
        return invalid(format!("sphere factor dimension must be in 2..=64, got {k}"));
    }
    Ok(k as u32)
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta < PI) {
        return invalid(format!("eta must lie in (0, pi), got {eta}"));
    }
    Ok(())
}

/// Pedrosa ball-type region with maximal slice radius `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallRegion {
    pub k: u32,
    pub eta: f64,
    pub area: f64,
    pub volume: f64,
    pub mean_curvature: f64,
}

fn cap(k: u32, y: f64) -> f64 {
    sin_power_integral(k - 1, y)
}

fn mean_curvature(k: u32, y: f64) -> f64 {
    y.sin().powi(k as i32 - 1) / cap(k, y)
}

/// Integrands of the area and volume formulas for one `η`.
struct Family {
    k: u32,
    eta: f64,
    h_eta: f64,
    // -h'(η)/h(η); 1 - u(η, η - g) = κ g + O(g²)
    kappa: f64,
}

impl Family {
    fn new(k: u32, eta: f64) -> Self {
        let h_eta = mean_curvature(k, eta);
        let kappa = h_eta - f64::from(k - 1) / eta.tan();
        Self { k, eta, h_eta, kappa }
    }

    /// `u` and `1 - u²` at `y`, where `gap = η - y` is supplied exactly.
    fn u_terms(&self, y: f64, gap: f64) -> (f64, f64) {
        if gap <= LINEARIZE_GAP * self.eta {
            let one_minus_u = self.kappa * gap;
            let u = 1.0 - one_minus_u;
            return (u, one_minus_u * (1.0 + u));
        }
        let u = if y < SMALL_Y {
            // cap(y)/sin^{k-1}(y) = (y/k)(1 + (k-1)y²/(3(k+2)) + O(y⁴)); the
            // quotient itself underflows to 0/0 near y = 0
            let k = f64::from(self.k);
            self.h_eta * y / k * (1.0 + (k - 1.0) * y * y / (3.0 * (k + 2.0)))
        } else {
            self.h_eta * cap(self.k, y) / y.sin().powi(self.k as i32 - 1)
        };
        (u, (1.0 - u) * (1.0 + u))
    }

    fn area_integrand(&self, y: f64, gap: f64) -> f64 {
        if y < 1e-150 {
            return 0.0;
        }
        let (_, w) = self.u_terms(y, gap);
        y.sin().powi(self.k as i32 - 1) / w.sqrt()
    }

    fn volume_integrand(&self, y: f64, gap: f64) -> f64 {
        if y < 1e-150 {
            return 0.0;
        }
        let (u, w) = self.u_terms(y, gap);
        cap(self.k, y) * u / w.sqrt()
    }

    fn prefactor(&self) -> f64 {
        2.0 * sphere_volume(self.k - 1)
    }

    /// Asymptotic region for tiny η: a Euclidean ball of radius η.
    fn euclidean(&self) -> BallRegion {
        let vk = sphere_volume(self.k);
        BallRegion {
            k: self.k,
            eta: self.eta,
            area: vk * self.eta.powi(self.k as i32),
            volume: vk * self.eta.powi(self.k as i32 + 1) / f64::from(self.k + 1),
            mean_curvature: self.h_eta,
        }
    }

    fn area_substituted(&self, tol: Tolerance) -> Result<f64> {
        let r = gauss_kronrod(
            |t| {
                let g = t * t;
                2.0 * t * self.area_integrand(self.eta - g, g)
            },
            0.0,
            self.eta.sqrt(),
            tol,
        )?;
        Ok(self.prefactor() * r.value)
    }

    fn volume_substituted(&self, tol: Tolerance) -> Result<f64> {
        let r = gauss_kronrod(
            |t| {
                let g = t * t;
                2.0 * t * self.volume_integrand(self.eta - g, g)
            },
            0.0,
            self.eta.sqrt(),
            tol,
        )?;
        Ok(self.prefactor() * r.value)
    }

    fn region(&self, tol: Tolerance) -> Result<BallRegion> {
        if self.eta < TINY_ETA {
            return Ok(self.euclidean());
        }
        Ok(BallRegion {
            k: self.k,
            eta: self.eta,
            area: self.area_substituted(tol)?,
            volume: self.volume_substituted(tol)?,
            mean_curvature: self.h_eta,
        })
    }
}

/// `u(η, y) = h(η) / h(y)` for `0 < y ≤ η < π`.
pub fn u_factor(k: i64, eta: f64, y: f64) -> Result<f64> {
    let k = check_k(k)?;
    check_eta(eta)?;
    if !(y > 0.0) {
        return invalid(format!("y must be positive, got {y}"));
    }
    if y > eta {
        return invalid(format!("y = {y} exceeds eta = {eta}"));
    }
    if y == eta {
        return Ok(1.0);
    }
    Ok(Family::new(k, eta).u_terms(y, eta - y).0)
}

/// Area and volume of the ball-type region with radius `eta`, by the
/// substituted Gauss–Kronrod route.
pub fn ball_region(k: i64, eta: f64, tol: Tolerance) -> Result<BallRegion> {
    let k = check_k(k)?;
    check_eta(eta)?;
    Family::new(k, eta).region(tol)
}

/// Same quantities by tanh-sinh on the unsubstituted, singular integrands.
/// No small-η shortcut is taken.
pub fn ball_region_crosscheck(k: i64, eta: f64, tol: Tolerance) -> Result<BallRegion> {
    let k = check_k(k)?;
    check_eta(eta)?;
    let fam = Family::new(k, eta);
    let area = tanh_sinh(|y, _, gap| fam.area_integrand(y, gap), 0.0, eta, tol)?.value;
    let volume = tanh_sinh(|y, _, gap| fam.volume_integrand(y, gap), 0.0, eta, tol)?.value;
    Ok(BallRegion {
        k,
        eta,
        area: fam.prefactor() * area,
        volume: fam.prefactor() * volume,
        mean_curvature: fam.h_eta,
    })
}

/// Boundary area `A(η)` of the unit-scale ball-type region.
pub fn ball_area(k: i64, eta: f64) -> Result<f64> {
    let k = check_k(k)?;
    check_eta(eta)?;
    let fam = Family::new(k, eta);
    if eta < TINY_ETA {
        return Ok(fam.euclidean().area);
    }
    fam.area_substituted(Tolerance::default())
}

/// Enclosed volume `V(η)` of the unit-scale ball-type region.
pub fn ball_volume(k: i64, eta: f64) -> Result<f64> {
    let k = check_k(k)?;
    check_eta(eta)?;
    let fam = Family::new(k, eta);
    if eta < TINY_ETA {
        return Ok(fam.euclidean().volume);
    }
    fam.volume_substituted(Tolerance::default())
}

/// `(η*, v₀)`: the radius where `A(η*) = 2 V_k` and the volume there.
pub fn crossover(k: i64) -> Result<(f64, f64)> {
    let p = CylinderProfile::shared(k)?;
    Ok((p.eta_star(), p.v0()))
}

fn solve_crossover(k: u32, tol: Tolerance) -> Result<f64> {
    let target = 2.0 * sphere_volume(k);
    let area = |eta: f64| Family::new(k, eta).area_substituted(tol).map(|a| a - target);
    // A rises from 0; take the first sign change on a coarse scan
    let step = 0.05;
    let mut lo = step;
    let mut f_lo = area(lo)?;
    while lo + step < PI - 0.01 {
        let hi = lo + step;
        let f_hi = area(hi)?;
        if f_lo < 0.0 && f_hi >= 0.0 {
            return brent(area, lo, hi, 1e-13);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::RootNotBracketed {
        a: step,
        b: PI - 0.01,
        fa: f_lo,
        fb: f_lo,
    })
}

/// Tabulated ball-type family of one `S^k × ℝ` on `(0, η*]`, with volume
/// inversion. Built once and read-only afterwards.
#[derive(Debug, Clone)]
pub struct CylinderProfile {
    k: u32,
    tol: Tolerance,
    eta_star: f64,
    v0: f64,
    table: Vec<BallRegion>,
}

type CacheKey = (u32, u64, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<CylinderProfile>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<CylinderProfile>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl CylinderProfile {
    pub fn new(k: i64, tol: Tolerance) -> Result<Self> {
        let k = check_k(k)?;
        let eta_star = solve_crossover(k, tol)?;
        let mut etas: Vec<f64> = Vec::new();
        // log-dense near 0, then uniform up to η*
        let log_lo = TINY_ETA.ln();
        let log_hi = 0.05f64.ln();
        for i in 0..24 {
            etas.push((log_lo + (log_hi - log_lo) * f64::from(i) / 24.0).exp());
        }
        for i in 0..100 {
            etas.push(0.05 + (eta_star - 0.05) * f64::from(i) / 100.0);
        }
        etas.push(eta_star);
        let table = etas
            .iter()
            .map(|&eta| Family::new(k, eta).region(tol))
            .collect::<Result<Vec<_>>>()?;
        for w in table.windows(2) {
            if !(w[1].volume > w[0].volume) {
                return Err(Error::MonotonicityViolated { eta_lo: w[0].eta, eta_hi: w[1].eta });
            }
        }
        let v0 = table[table.len() - 1].volume;
        Ok(Self { k, tol, eta_star, v0, table })
    }

    /// Shared instance at the default tolerance.
    pub fn shared(k: i64) -> Result<Arc<Self>> {
        Self::shared_with(k, Tolerance::default())
    }

    pub fn shared_with(k: i64, tol: Tolerance) -> Result<Arc<Self>> {
        let key = (check_k(k)?, tol.rel.to_bits(), tol.abs.to_bits());
        if let Some(p) = cache().lock().expect("cylinder cache poisoned").get(&key) {
            return Ok(Arc::clone(p));
        }
        let built = Arc::new(Self::new(k, tol)?);
        let mut guard = cache().lock().expect("cylinder cache poisoned");
        Ok(Arc::clone(guard.entry(key).or_insert(built)))
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn eta_star(&self) -> f64 {
        self.eta_star
    }

    /// Crossover volume at unit scale.
    pub fn v0(&self) -> f64 {
        self.v0
    }

    /// Boundary area of a cylindrical section at unit scale, `2 V_k`.
    pub fn section_area(&self) -> f64 {
        2.0 * sphere_volume(self.k)
    }

    pub fn table(&self) -> &[BallRegion] {
        &self.table
    }

    pub fn region(&self, eta: f64) -> Result<BallRegion> {
        check_eta(eta)?;
        Family::new(self.k, eta).region(self.tol)
    }

    /// Ball-type region of unit-scale volume `v ∈ (0, v₀]`.
    pub fn invert_volume(&self, v: f64) -> Result<BallRegion> {
        if !(v > 0.0 && v <= self.v0) {
            return Err(Error::VolumeOutOfRange { volume: v, min: 0.0, max: self.v0 });
        }
        let first = &self.table[0];
        if v <= first.volume {
            let vk = sphere_volume(self.k);
            let eta = (f64::from(self.k + 1) * v / vk).powf(1.0 / f64::from(self.k + 1));
            return Ok(Family::new(self.k, eta).euclidean());
        }
        let i = self.table.partition_point(|r| r.volume < v);
        let hi = &self.table[i];
        if hi.volume == v {
            return Ok(*hi);
        }
        let lo = &self.table[i - 1];
        let fam_volume = |eta: f64| -> Result<f64> {
            Ok(Family::new(self.k, eta).volume_substituted(self.tol)? - v)
        };
        let eta = brent(fam_volume, lo.eta, hi.eta, 1e-13 * hi.eta)?;
        self.region(eta)
    }

    /// Profile of the unit cylinder.
    pub fn profile_unit(&self, v: f64) -> Result<f64> {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::VolumeOutOfRange { volume: v, min: 0.0, max: f64::INFINITY });
        }
        if v >= self.v0 {
            return Ok(self.section_area());
        }
        Ok(self.invert_volume(v)?.area)
    }

    /// Profile of `(S^k × ℝ, mu (g₀ + dx²))`:
    /// `I_μ(v) = μ^{k/2} I₁(μ^{-(k+1)/2} v)`.
    pub fn profile(&self, mu: f64, v: f64) -> Result<f64> {
        let k = f64::from(self.k);
        Ok(mu.powf(k / 2.0) * self.profile_unit(mu.powf(-(k + 1.0) / 2.0) * v)?)
    }
}

pub fn cylinder_profile(spec: &CylinderSpec, v: f64) -> Result<f64> {
    CylinderProfile::shared(i64::from(spec.k))?.profile(spec.mu, v)
}

/// `I(v) / v^{k/(k+1)}`.
pub fn profile_ratio(spec: &CylinderSpec, v: f64) -> Result<f64> {
    let d = f64::from(spec.dim());
    Ok(cylinder_profile(spec, v)? / v.powf((d - 1.0) / d))
}
