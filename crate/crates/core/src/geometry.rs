//! Round spheres `(S^d, μ g₀)`: volumes, Euclidean isoperimetric constants
//! and the isoperimetric profile, realized by geodesic balls.
//!
//! Everything is computed in unit-sphere normalization; the metric scale
//! enters only through the scaling law (volumes by `μ^{d/2}`, areas by
//! `μ^{(d-1)/2}`).

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::roots::newton_bisect;
use crate::special::{sin_power_integral, sphere_volume, wallis};

/// Volume of the unit round `n`-sphere.
pub fn unit_sphere_volume(n: i64) -> Result<f64> {
    if n < 1 {
        return invalid(format!("sphere dimension must be >= 1, got {n}"));
    }
    Ok(sphere_volume(n as u32))
}

/// Classical isoperimetric constant γ_n of Euclidean n-space: the boundary
/// area of the unit ball divided by its volume to the power (n-1)/n.
pub fn gamma(n: i64) -> Result<f64> {
    if n < 2 {
        return invalid(format!("isoperimetric constant needs n >= 2, got {n}"));
    }
    Ok(euclidean_constant(n as u32))
}

/// γ_n without validation; also meaningful for n = 1 (γ_1 = 2).
pub(crate) fn euclidean_constant(n: u32) -> f64 {
    let area = sphere_volume(n - 1);
    let ball = area / f64::from(n);
    area / ball.powf((f64::from(n) - 1.0) / f64::from(n))
}

/// A round sphere `(S^dim, mu · g₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSphere")]
pub struct SphereMetricSpec {
    dim: u32,
    mu: f64,
}

#[derive(Deserialize)]
struct RawSphere {
    dim: i64,
    mu: f64,
}

impl TryFrom<RawSphere> for SphereMetricSpec {
    type Error = Error;

    fn try_from(raw: RawSphere) -> Result<Self> {
        Self::new(raw.dim, raw.mu)
    }
}

/// A point on a profile curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub volume: f64,
    pub boundary_area: f64,
}

impl SphereMetricSpec {
    pub fn new(dim: i64, mu: f64) -> Result<Self> {
        if dim < 2 {
            return invalid(format!("sphere dimension must be >= 2, got {dim}"));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return invalid(format!("metric scale must be positive, got {mu}"));
        }
        Ok(Self { dim: dim as u32, mu })
    }

    pub fn unit(dim: i64) -> Result<Self> {
        Self::new(dim, 1.0)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    fn volume_scale(&self) -> f64 {
        self.mu.powf(f64::from(self.dim) / 2.0)
    }

    fn area_scale(&self) -> f64 {
        self.mu.powf((f64::from(self.dim) - 1.0) / 2.0)
    }

    pub fn total_volume(&self) -> f64 {
        self.volume_scale() * sphere_volume(self.dim)
    }

    /// Volume of the geodesic ball of (unit-sphere) radius `r`.
    pub fn ball_volume(&self, r: f64) -> f64 {
        self.volume_scale() * sphere_volume(self.dim - 1) * sin_power_integral(self.dim - 1, r)
    }

    /// Boundary area of the geodesic ball of (unit-sphere) radius `r`.
    pub fn ball_area(&self, r: f64) -> f64 {
        self.area_scale() * sphere_volume(self.dim - 1) * r.sin().powi(self.dim as i32 - 1)
    }

    /// Radius of the geodesic ball enclosing volume `v`.
    pub fn radius_for_volume(&self, v: f64) -> Result<f64> {
        let total = self.total_volume();
        if !(v > 0.0 && v < total) {
            return Err(Error::VolumeOutOfRange { volume: v, min: 0.0, max: total });
        }
        let m = self.dim - 1;
        let unit = v / self.volume_scale() / sphere_volume(m);
        let half = wallis(m);
        // solve on the smaller half and reflect, so both tails keep relative accuracy
        let (target, reflect) = if unit > half { (2.0 * half - unit, true) } else { (unit, false) };
        let guess = (f64::from(self.dim) * target).powf(1.0 / f64::from(self.dim));
        let r = newton_bisect(
            |r| (sin_power_integral(m, r) - target, r.sin().powi(m as i32)),
            0.0,
            PI / 2.0,
            guess,
            1e-15,
        )?;
        Ok(if reflect { PI - r } else { r })
    }

    /// Isoperimetric profile: boundary area of the geodesic ball of volume `v`.
    pub fn profile(&self, v: f64) -> Result<f64> {
        let r = self.radius_for_volume(v)?;
        // sin(π - r) = sin(r); evaluate on the short side for accuracy
        Ok(self.ball_area(r.min(PI - r)))
    }

    /// `(volume, area)` of the profile maximum, the hemisphere.
    pub fn peak(&self) -> (f64, f64) {
        (
            0.5 * self.total_volume(),
            self.area_scale() * sphere_volume(self.dim - 1),
        )
    }

    /// `(S^dim, factor · mu · g₀)`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        Self::new(i64::from(self.dim), self.mu * factor)
    }
}

pub fn sphere_profile(spec: &SphereMetricSpec, v: f64) -> Result<f64> {
    spec.profile(v)
}

pub fn sphere_profile_peak(spec: &SphereMetricSpec) -> (f64, f64) {
    spec.peak()
}

/// Checks `I_{μ}(μ^{d/2} v) = μ^{(d-1)/2} I_1(v)` at one volume (relative
/// tolerance 1e-9). Invalid input yields `false`.
pub fn scale_profile_identity_check(dim: i64, mu: f64, v: f64) -> bool {
    let (Ok(scaled), Ok(unit)) = (SphereMetricSpec::new(dim, mu), SphereMetricSpec::unit(dim)) else {
        return false;
    };
    let d = dim as f64;
    let (Ok(lhs), Ok(rhs)) = (scaled.profile(mu.powf(d / 2.0) * v), unit.profile(v)) else {
        return false;
    };
    let rhs = mu.powf((d - 1.0) / 2.0) * rhs;
    (lhs - rhs).abs() <= 1e-9 * rhs.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn sphere_volume_examples() {
        assert!(rel(unit_sphere_volume(3).unwrap(), 2.0 * PI * PI) < 1e-12);
        assert!(rel(unit_sphere_volume(4).unwrap(), 8.0 * PI * PI / 3.0) < 1e-12);
        assert!(rel(unit_sphere_volume(1).unwrap(), 2.0 * PI) < 1e-12);
        assert!(unit_sphere_volume(0).is_err());
        assert!(unit_sphere_volume(-3).is_err());
    }

    #[test]
    fn gamma_examples() {
        assert!(rel(gamma(4).unwrap(), 2f64.powf(1.75) * PI.sqrt()) < 1e-12);
        let g5 = (8.0 * PI * PI / 3.0).powf(0.2) * 5f64.powf(0.8);
        assert!(rel(gamma(5).unwrap(), g5) < 1e-12);
        assert!((gamma(8).unwrap() - 9.5310).abs() < 5e-5);
        assert!((gamma(9).unwrap() - 10.2762).abs() < 5e-5);
        assert!((gamma(10).unwrap() - 10.9814).abs() < 5e-5);
        assert!(gamma(1).is_err());
        // the closed forms printed alongside the decimals
        assert!(rel(gamma(8).unwrap(), (8f64.powi(7) / 3.0).powf(1.0 / 8.0) * PI.sqrt()) < 1e-12);
        let g9 = (32.0 * PI.powi(4) * 9f64.powi(8) / 105.0).powf(1.0 / 9.0);
        assert!(rel(gamma(9).unwrap(), g9) < 1e-12);
        assert!(rel(gamma(10).unwrap(), (1e9f64 / 12.0).powf(0.1) * PI.sqrt()) < 1e-12);
        assert_eq!(euclidean_constant(1), 2.0);
    }

    #[test]
    fn rejects_bad_specs_and_volumes() {
        assert!(SphereMetricSpec::new(1, 1.0).is_err());
        assert!(SphereMetricSpec::new(3, 0.0).is_err());
        assert!(SphereMetricSpec::new(3, f64::NAN).is_err());
        let s = SphereMetricSpec::unit(5).unwrap();
        assert!(matches!(s.profile(0.0), Err(Error::VolumeOutOfRange { .. })));
        assert!(s.profile(PI.powi(3)).is_err());
        assert!(s.profile(-1.0).is_err());
    }

    #[test]
    fn equatorial_ball_of_s5() {
        let s = SphereMetricSpec::unit(5).unwrap();
        let a = s.profile(PI.powi(3) / 2.0).unwrap();
        assert!(rel(a, 8.0 * PI * PI / 3.0) < 1e-12);
    }

    #[test]
    fn closed_form_s5_profile() {
        let s = SphereMetricSpec::unit(5).unwrap();
        for i in 1..50 {
            let r = PI * f64::from(i) / 50.0;
            // ∫₀^r sin⁴ = 3r/8 - sin 2r / 4 + sin 4r / 32
            let v = 8.0 / 3.0 * PI * PI * (3.0 * r / 8.0 - (2.0 * r).sin() / 4.0 + (4.0 * r).sin() / 32.0);
            let expect = 8.0 / 3.0 * PI * PI * r.sin().powi(4);
            assert!((s.profile(v).unwrap() - expect).abs() <= 1e-8, "r = {r}");
        }
    }

    #[test]
    fn peak_values() {
        let s = SphereMetricSpec::new(5, 6.3).unwrap();
        let (v, a) = s.peak();
        assert!((v - 1544.44).abs() < 0.01);
        let lambda = 3.0 * 7f64.sqrt() / 10.0;
        assert!((lambda * a - 829.12).abs() < 0.01);
        let s4 = SphereMetricSpec::new(4, 2f64.powf(2.0 / 3.0)).unwrap();
        assert!(rel(s4.peak().1, 4.0 * PI * PI) < 1e-12);
        let u = SphereMetricSpec::unit(7).unwrap();
        assert_eq!(u.peak(), (sphere_volume(7) / 2.0, sphere_volume(6)));
    }

    #[test]
    fn small_volume_limit_is_gamma() {
        for (d, mu) in [(5, 1.0), (5, 6.3), (4, 2.5), (4, 2f64.powf(2.0 / 3.0))] {
            let s = SphereMetricSpec::new(d, mu).unwrap();
            let g = gamma(d).unwrap();
            let e = (d as f64 - 1.0) / d as f64;
            for v in [1e-6, 1e-8] {
                let ratio = s.profile(v).unwrap() / f64::powf(v, e);
                assert!(rel(ratio, g) < 1e-3, "d={d} mu={mu} v={v}");
            }
        }
    }

    #[test]
    fn scaling_identity_examples() {
        assert!(scale_profile_identity_check(5, 2.5, PI.powi(3) / 4.0));
        assert!(scale_profile_identity_check(4, 2f64.powf(2.0 / 3.0), 1.0));
        assert!(scale_profile_identity_check(10, 1.387, 10.0));
        assert!(!scale_profile_identity_check(1, 1.0, 1.0));
    }
}
