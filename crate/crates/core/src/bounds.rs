//! Certified lower bounds for isoperimetric profiles of `S^k × ℝ^n`.
//!
//! A [`ProfileBound`] is a function of volume known to lie below the profile
//! of some space on its valid range. Bounds are produced by exact profiles,
//! by composing a sphere domination with a Euclidean factor (Ros), by the
//! Morgan product-region estimate, and by chords between two certified
//! values of a concave profile.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use crate::cylinder::CylinderProfile;
use crate::error::{invalid, Error, Result};
use crate::geometry::{euclidean_constant, SphereMetricSpec};
use crate::optimize::{golden_section_min, Scan};
use crate::quad::Tolerance;

/// Numerical settings shared by evaluation and certification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics {
    pub tol: Tolerance,
    pub grid_nodes: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Self { tol: Tolerance::default(), grid_nodes: 512 }
    }
}

/// Volume interval `[lo, hi]`; `hi = None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeRange {
    pub lo: f64,
    pub hi: Option<f64>,
}

impl VolumeRange {
    pub const ALL: Self = Self { lo: 0.0, hi: None };

    pub fn new(lo: f64, hi: Option<f64>) -> Self {
        Self { lo, hi }
    }

    pub fn from(lo: f64) -> Self {
        Self { lo, hi: None }
    }

    pub fn upper(&self) -> f64 {
        self.hi.unwrap_or(f64::INFINITY)
    }

    pub fn contains(&self, v: f64) -> bool {
        let slack = 1e-12 * v.abs().max(1.0);
        v >= self.lo - slack && v <= self.upper() + slack
    }
}

impl fmt::Display for VolumeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(hi) => write!(f, "[{}, {}]", self.lo, hi),
            None => write!(f, "[{}, inf)", self.lo),
        }
    }
}

/// The two product spaces with a closed-form Morgan estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MorganInstance {
    #[serde(rename = "S3xR2")]
    S3xR2,
    #[serde(rename = "S2xR3")]
    S2xR3,
}

impl MorganInstance {
    pub fn factors(self) -> ProductFactors {
        match self {
            Self::S3xR2 => ProductFactors { sphere_dim: 3, euclid_dim: 2 },
            Self::S2xR3 => ProductFactors { sphere_dim: 2, euclid_dim: 3 },
        }
    }

    /// Volume from which the infimum over product regions sits at `t = π`.
    pub fn threshold(self) -> f64 {
        match self {
            Self::S3xR2 => 16.0,
            Self::S2xR3 => 27.0,
        }
    }

    /// `(coefficient, exponent)` of the resulting power law `I ≥ a v^q`.
    pub fn power_law(self) -> (f64, f64) {
        match self {
            Self::S3xR2 => ((2.0 * PI).powf(1.5) / 2f64.sqrt(), 0.5),
            Self::S2xR3 => (2f64.powf(5.0 / 6.0) * (3.0 * PI).powf(2.0 / 3.0), 2.0 / 3.0),
        }
    }

    /// The normalized objective whose minimum over `(0, π]` controls the
    /// estimate at the threshold volume.
    pub fn auxiliary(self, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        match self {
            Self::S3xR2 => {
                let w = t - c * s;
                4.0 * s * s / w + PI * (2.0 * w).sqrt()
            }
            Self::S2xR3 => {
                let w = 1.0 - c;
                3.0 * s / w + 2.0 * (3.0 * PI).powf(2.0 / 3.0) * w.cbrt()
            }
        }
    }

    /// Closed-form minimum value of [`Self::auxiliary`], attained at `t = π`.
    pub fn auxiliary_min(self) -> f64 {
        match self {
            Self::S3xR2 => 2f64.sqrt() * PI.powf(1.5),
            Self::S2xR3 => 2.0 * 2f64.cbrt() * (3.0 * PI).powf(2.0 / 3.0),
        }
    }
}

impl fmt::Display for MorganInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::S3xR2 => write!(f, "S3xR2"),
            Self::S2xR3 => write!(f, "S2xR3"),
        }
    }
}

/// `(S^a, g₀) × (ℝ^b, dx²)`: a sphere factor whose profile is realized by
/// geodesic balls and a Euclidean factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductFactors {
    pub sphere_dim: u32,
    pub euclid_dim: u32,
}

impl ProductFactors {
    /// Boundary of the product region `B(t) × B_b` with total volume `v`:
    /// `f₁(v₁) v₂ + f₂(v₂) v₁` with `v₁ = |B(t)|`, `v₂ = v / v₁`.
    pub fn objective(&self, v: f64, t: f64) -> f64 {
        let sphere = SphereMetricSpec::new(i64::from(self.sphere_dim), 1.0).expect("sphere_dim >= 2");
        let v1 = sphere.ball_volume(t);
        let a1 = sphere.ball_area(t);
        let v2 = v / v1;
        let b = f64::from(self.euclid_dim);
        let f2 = euclidean_constant(self.euclid_dim) * v2.powf((b - 1.0) / b);
        a1 * v2 + f2 * v1
    }
}

/// Which search produced a Morgan infimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchPath {
    GoldenSection,
    GridFallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorganEstimate {
    /// `I_P(v) / √2`, the lower bound for the profile.
    pub bound: f64,
    /// `I_P(v)`, the infimum over product regions.
    pub infimum: f64,
    pub t_min: f64,
    pub path: SearchPath,
}

const SCAN_POINTS: usize = 1000;

fn minimize_on_half_circle<F: Fn(f64) -> f64>(f: F) -> (f64, f64, SearchPath) {
    let scan = Scan::uniform(&f, PI / SCAN_POINTS as f64, PI, SCAN_POINTS);
    let path = if scan.is_unimodal_valley() {
        SearchPath::GoldenSection
    } else {
        SearchPath::GridFallback
    };
    let (lo, hi) = scan.bracket(scan.argmin());
    let (t, ft) = golden_section_min(&f, lo, hi, 1e-10);
    // the scan includes t = π itself; keep whichever is lower
    let (ti, fi) = (scan.xs[scan.argmin()], scan.values[scan.argmin()]);
    if fi < ft {
        (ti, fi, path)
    } else {
        (t, ft, path)
    }
}

/// Morgan's estimate `I(v) ≥ I_P(v)/√2` for `S^a × ℝ^b`.
pub fn morgan_product_bound(factors: ProductFactors, v: f64) -> Result<MorganEstimate> {
    if factors.sphere_dim < 2 || factors.euclid_dim < 1 {
        return invalid("Morgan bound needs a sphere factor of dim >= 2 and a Euclidean factor");
    }
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::VolumeOutOfRange { volume: v, min: 0.0, max: f64::INFINITY });
    }
    let (t_min, infimum, path) = minimize_on_half_circle(|t| factors.objective(v, t));
    Ok(MorganEstimate {
        bound: infimum / 2f64.sqrt(),
        infimum,
        t_min,
        path,
    })
}

/// Locates the global minimum of the instance's auxiliary function on
/// `(0, π]` and checks it is `t = π` with the closed-form value.
pub fn verify_auxiliary_min(instance: MorganInstance) -> Result<(f64, f64)> {
    let (t, value, _) = minimize_on_half_circle(|t| instance.auxiliary(t));
    let expect = instance.auxiliary_min();
    if (t - PI).abs() > 1e-6 {
        return Err(Error::AuxiliaryCheck(format!(
            "{instance}: minimum at t = {t}, expected pi"
        )));
    }
    if (value - expect).abs() > 1e-9 * expect {
        return Err(Error::AuxiliaryCheck(format!(
            "{instance}: minimum value {value}, expected {expect}"
        )));
    }
    Ok((t, value))
}

/// Shape of a [`ProfileBound`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundKind {
    /// Profile of `(S^k × ℝ, mu (g₀ + dx²))`.
    CylinderExact { k: u32, mu: f64 },
    /// Profile of `(S^dim, mu g₀)`.
    SphereExact { dim: u32, mu: f64 },
    /// `lambda · I_{(S^dim × ℝ, mu (g₀ + dx²))}`.
    RosComposed { lambda: f64, dim: u32, mu: f64 },
    /// `I_P / √2` for one of the Morgan instances, evaluated numerically.
    MorganProduct { instance: MorganInstance },
    PowerLaw { coefficient: f64, exponent: f64 },
    ChordLine { p1: (f64, f64), p2: (f64, f64) },
    Constant { value: f64 },
}

/// A lower bound for some profile, valid on `valid_range`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileBound {
    pub label: String,
    #[serde(flatten)]
    pub kind: BoundKind,
    pub valid_range: VolumeRange,
    #[serde(default)]
    pub provenance: Vec<String>,
}

impl ProfileBound {
    pub fn new(label: impl Into<String>, kind: BoundKind, valid_range: VolumeRange) -> Self {
        Self { label: label.into(), kind, valid_range, provenance: Vec::new() }
    }

    pub fn with_provenance(mut self, step: impl Into<String>) -> Self {
        self.provenance.push(step.into());
        self
    }

    pub fn cylinder(k: u32, mu: f64) -> Self {
        Self::new(
            format!("I(S^{k} x R, {}(g0+dx^2))", fmt_mu(mu)),
            BoundKind::CylinderExact { k, mu },
            VolumeRange::ALL,
        )
        .with_provenance("exact profile: ball-type regions below v0, cylindrical sections above")
    }

    pub fn sphere(spec: &SphereMetricSpec) -> Self {
        Self::new(
            format!("I(S^{}, {} g0)", spec.dim(), fmt_mu(spec.mu())),
            BoundKind::SphereExact { dim: spec.dim(), mu: spec.mu() },
            VolumeRange::new(0.0, Some(spec.total_volume())),
        )
        .with_provenance("exact profile: geodesic balls")
    }

    pub fn constant(value: f64, valid_range: VolumeRange) -> Self {
        Self::new(format!("{value}"), BoundKind::Constant { value }, valid_range)
    }

    pub fn power_law(coefficient: f64, exponent: f64, valid_range: VolumeRange) -> Self {
        Self::new(
            format!("{coefficient} v^{exponent}"),
            BoundKind::PowerLaw { coefficient, exponent },
            valid_range,
        )
    }

    /// Evaluate at `v` with the default numerics.
    pub fn eval(&self, v: f64) -> Result<f64> {
        self.eval_with(v, &Numerics::default())
    }

    pub fn eval_with(&self, v: f64, num: &Numerics) -> Result<f64> {
        if !(v > 0.0) || !self.valid_range.contains(v) {
            return Err(Error::VolumeOutOfRange {
                volume: v,
                min: self.valid_range.lo,
                max: self.valid_range.upper(),
            });
        }
        match self.kind {
            BoundKind::CylinderExact { k, mu } => {
                CylinderProfile::shared_with(i64::from(k), num.tol)?.profile(mu, v)
            }
            BoundKind::SphereExact { dim, mu } => SphereMetricSpec::new(i64::from(dim), mu)?.profile(v),
            BoundKind::RosComposed { lambda, dim, mu } => {
                Ok(lambda * CylinderProfile::shared_with(i64::from(dim), num.tol)?.profile(mu, v)?)
            }
            BoundKind::MorganProduct { instance } => Ok(morgan_product_bound(instance.factors(), v)?.bound),
            BoundKind::PowerLaw { coefficient, exponent } => Ok(coefficient * v.powf(exponent)),
            BoundKind::ChordLine { p1, p2 } => Ok(p1.1 + (p2.1 - p1.1) * (v - p1.0) / (p2.0 - p1.0)),
            BoundKind::Constant { value } => Ok(value),
        }
    }

    /// Concave on its valid range.
    pub fn is_concave(&self) -> bool {
        match self.kind {
            // profiles of manifolds with non-negative Ricci curvature
            BoundKind::CylinderExact { .. } | BoundKind::SphereExact { .. } | BoundKind::RosComposed { .. } => true,
            BoundKind::ChordLine { .. } | BoundKind::Constant { .. } => true,
            BoundKind::PowerLaw { coefficient, exponent } => coefficient >= 0.0 && (0.0..=1.0).contains(&exponent),
            BoundKind::MorganProduct { .. } => false,
        }
    }

    pub fn is_non_decreasing(&self) -> bool {
        match self.kind {
            BoundKind::CylinderExact { .. } | BoundKind::RosComposed { .. } | BoundKind::Constant { .. } => true,
            BoundKind::SphereExact { .. } | BoundKind::MorganProduct { .. } => false,
            BoundKind::PowerLaw { coefficient, exponent } => coefficient >= 0.0 && exponent >= 0.0,
            BoundKind::ChordLine { p1, p2 } => p2.1 >= p1.1,
        }
    }

    /// Whether `v ↦ bound(v) / v^exponent` is non-increasing on the range.
    /// For exact profiles of non-negatively curved `D`-manifolds this holds
    /// with the exponent `(D-1)/D`, hence with any larger one.
    pub fn ratio_non_increasing(&self, exponent: f64) -> bool {
        let own = |d: u32| (f64::from(d) - 1.0) / f64::from(d);
        match self.kind {
            BoundKind::CylinderExact { k, .. } => exponent >= own(k + 1) - 1e-15,
            BoundKind::RosComposed { dim, lambda, .. } => lambda >= 0.0 && exponent >= own(dim + 1) - 1e-15,
            BoundKind::SphereExact { dim, .. } => exponent >= own(dim) - 1e-15,
            BoundKind::PowerLaw { coefficient, exponent: q } => coefficient >= 0.0 && q <= exponent,
            BoundKind::Constant { value } => value >= 0.0 && exponent >= 0.0,
            BoundKind::ChordLine { .. } | BoundKind::MorganProduct { .. } => false,
        }
    }

    /// `(value at the first anchor, slope)` for affine bounds.
    pub fn line_coefficients(&self) -> Option<(f64, f64, f64)> {
        match self.kind {
            BoundKind::ChordLine { p1, p2 } => Some((p1.0, p1.1, (p2.1 - p1.1) / (p2.0 - p1.0))),
            BoundKind::Constant { value } => Some((self.valid_range.lo, value, 0.0)),
            _ => None,
        }
    }
}

pub(crate) fn fmt_mu(mu: f64) -> String {
    let s = format!("{mu:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

/// The Morgan power law `I ≥ a v^q` for `v` at or above the instance
/// threshold, after verifying the auxiliary minimum it relies on.
pub fn morgan_power_law(instance: MorganInstance) -> Result<ProfileBound> {
    let (t, value) = verify_auxiliary_min(instance)?;
    let (a, q) = instance.power_law();
    let space = match instance {
        MorganInstance::S3xR2 => "S^3 x R^2",
        MorganInstance::S2xR3 => "S^2 x R^3",
    };
    Ok(ProfileBound::new(
        format!("Morgan bound on {space}: {a:.9} v^{q:.6}"),
        BoundKind::PowerLaw { coefficient: a, exponent: q },
        VolumeRange::from(instance.threshold()),
    )
    .with_provenance(format!(
        "I >= I_P/sqrt(2) over product regions; auxiliary minimum {value:.12} at t = {t:.9}"
    )))
}

/// Line through two certified values of lower bounds of the same concave
/// profile. Valid between the anchors.
pub fn chord_line(p1: (f64, f64), p2: (f64, f64)) -> Result<ProfileBound> {
    if !(p1.0 < p2.0) {
        return invalid(format!("chord anchors must satisfy v1 < v2, got {} and {}", p1.0, p2.0));
    }
    if !(p1.1.is_finite() && p2.1.is_finite() && p1.1 >= 0.0 && p2.1 >= 0.0) {
        return invalid("chord anchor values must be finite and non-negative");
    }
    let slope = (p2.1 - p1.1) / (p2.0 - p1.0);
    Ok(ProfileBound::new(
        format!("{:.6} + {:.6} (v - {})", p1.1, slope, p1.0),
        BoundKind::ChordLine { p1, p2 },
        VolumeRange::new(p1.0, Some(p2.0)),
    ))
}

/// Chord between `first(v1)` and `second(v2)`, recording both sources.
pub fn chord_between(first: &ProfileBound, v1: f64, second: &ProfileBound, v2: f64, num: &Numerics) -> Result<ProfileBound> {
    let a = first.eval_with(v1, num)?;
    let b = second.eval_with(v2, num)?;
    Ok(chord_line((v1, a), (v2, b))?
        .with_provenance(format!("anchor ({v1}, {a:.9}) on {}", first.label))
        .with_provenance(format!("anchor ({v2}, {b:.9}) on {}", second.label))
        .with_provenance("concave profile lies above its chords"))
}

/// `(S^sphere_dim × ℝ^euclid_dim, mu (g₀ + dx²))`; `euclid_dim = 0` is a
/// round sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Space {
    pub sphere_dim: u32,
    pub euclid_dim: u32,
    pub mu: f64,
}

impl Space {
    pub fn sphere(dim: u32, mu: f64) -> Self {
        Self { sphere_dim: dim, euclid_dim: 0, mu }
    }

    pub fn product(sphere_dim: u32, euclid_dim: u32, mu: f64) -> Self {
        Self { sphere_dim, euclid_dim, mu }
    }

    fn same_as(&self, other: &Space) -> bool {
        self.sphere_dim == other.sphere_dim
            && self.euclid_dim == other.euclid_dim
            && (self.mu - other.mu).abs() <= 1e-12 * self.mu.abs()
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let metric = if self.mu == 1.0 { String::new() } else { fmt_mu(self.mu) };
        match self.euclid_dim {
            0 => write!(f, "(S^{}, {}g0)", self.sphere_dim, metric),
            1 => write!(f, "(S^{} x R, {}(g0+dx^2))", self.sphere_dim, metric),
            m => write!(f, "(S^{} x R^{m}, {}(g0+dx^2))", self.sphere_dim, metric),
        }
    }
}

/// The statement `I_subject ≥ lambda · I_model`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domination {
    pub subject: Space,
    pub lambda: f64,
    pub model: Space,
    pub provenance: Vec<String>,
}

impl Domination {
    pub fn new(subject: Space, lambda: f64, model: Space, source: impl Into<String>) -> Self {
        Self { subject, lambda, model, provenance: vec![source.into()] }
    }

    /// Product with `(ℝ, dx²)` on both sides (Ros product theorem; a
    /// multiple of a model profile is again a model profile).
    pub fn ros_compose(&self) -> Self {
        let mut next = Self {
            subject: Space { euclid_dim: self.subject.euclid_dim + 1, ..self.subject },
            lambda: self.lambda,
            model: Space { euclid_dim: self.model.euclid_dim + 1, ..self.model },
            provenance: self.provenance.clone(),
        };
        next.provenance.push(format!("Ros product with R: {next}"));
        next
    }

    /// Both metrics multiplied by `factor`.
    pub fn rescale(&self, factor: f64) -> Self {
        let mut next = Self {
            subject: Space { mu: self.subject.mu * factor, ..self.subject },
            lambda: self.lambda,
            model: Space { mu: self.model.mu * factor, ..self.model },
            provenance: self.provenance.clone(),
        };
        next.provenance.push(format!("metrics scaled by {}: {next}", fmt_mu(factor)));
        next
    }

    /// `I_A ≥ λ₁ I_B` and `I_B ≥ λ₂ I_C` give `I_A ≥ λ₁λ₂ I_C`.
    pub fn chain(&self, next: &Domination) -> Result<Self> {
        if !self.model.same_as(&next.subject) {
            return invalid(format!("cannot chain: model {} differs from subject {}", self.model, next.subject));
        }
        let mut provenance = self.provenance.clone();
        provenance.extend(next.provenance.iter().cloned());
        let mut out = Self {
            subject: self.subject,
            lambda: self.lambda * next.lambda,
            model: next.model,
            provenance,
        };
        out.provenance.push(format!("chained: {out}"));
        Ok(out)
    }

    /// The computable bound `λ I_model` as a function of volume; the model
    /// must be a round sphere or a sphere times a line.
    pub fn to_profile_bound(&self) -> Result<ProfileBound> {
        let m = self.model;
        let kind = match m.euclid_dim {
            1 => BoundKind::RosComposed { lambda: self.lambda, dim: m.sphere_dim, mu: m.mu },
            _ => return invalid(format!("model {m} has no computable profile")),
        };
        let mut b = ProfileBound::new(
            format!("{} I{}", fmt_mu(self.lambda), m),
            kind,
            VolumeRange::ALL,
        );
        b.provenance = self.provenance.clone();
        b.provenance.push(format!("lower bound for I{}", self.subject));
        Ok(b)
    }
}

impl fmt::Display for Domination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{} >= {} I{}", self.subject, fmt_mu(self.lambda), self.model)
    }
}

/// `I_X ≥ λ I_{(S^d, μ g₀)}` ⟹ `I_{X×ℝ} ≥ λ I_{(S^d×ℝ, μ(g₀+dx²))}`, as an
/// evaluable bound.
pub fn ros_compose(bound: &Domination) -> Result<ProfileBound> {
    bound.ros_compose().to_profile_bound()
}
