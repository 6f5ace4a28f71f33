//! Certificates of profile domination `I_X(v) ≥ c · I_{(S^d, μ g₀)}(v)`.
//!
//! A plan splits `(0, range_end]` into abutting regimes, each closed by one
//! argument:
//!
//! * small volume: `left(v)/v^{(d-1)/d}` is non-increasing, the sphere's
//!   ratio never exceeds `γ_d`, so one value at the right end suffices;
//! * grid-chord: on each grid cell the concave left bound lies above its
//!   chord and the concave sphere profile below its end tangents;
//! * line: an affine lower bound against the sphere, the difference being
//!   concave, maximized by golden-section search;
//! * tail: a non-decreasing left bound beyond `v_b` against the sphere's
//!   global maximum.
//!
//! A regime passes when its worst margin exceeds `1e-6` of the compared
//! sphere value.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::bounds::{chord_between, chord_line, Numerics, ProfileBound, VolumeRange};
use crate::error::{invalid, Error, Result};
use crate::geometry::{euclidean_constant, SphereMetricSpec};
use crate::optimize::golden_section_max;

/// Relative margin a regime must clear.
pub const MARGIN_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeMethod {
    SmallVolume,
    GridChord,
    Line,
    Tail,
}

impl fmt::Display for RegimeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SmallVolume => "small-volume",
            Self::GridChord => "grid-chord",
            Self::Line => "line",
            Self::Tail => "tail",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
        })
    }
}

/// Outcome of one regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeRecord {
    pub interval: VolumeRange,
    pub method: RegimeMethod,
    /// Label of the left-hand bound used.
    pub bound: String,
    /// Worst value of `left - c · right` found by the argument.
    pub margin: f64,
    /// `margin` relative to the compared `c · right` value.
    pub relative_margin: f64,
    /// Volume where the worst margin occurs.
    pub witness: f64,
    pub passed: bool,
    pub justification: String,
}

/// `c · I_sphere`, extended by zero past the sphere's total volume.
#[derive(Debug, Clone, Copy)]
struct Target<'a> {
    sphere: &'a SphereMetricSpec,
    c: f64,
}

impl Target<'_> {
    fn total(&self) -> f64 {
        self.sphere.total_volume()
    }

    fn value(&self, v: f64) -> Result<f64> {
        if v >= self.total() {
            return Ok(0.0);
        }
        Ok(self.c * self.sphere.profile(v)?)
    }

    /// `(value, slope)` of `c · I_sphere` at `v`.
    fn value_and_slope(&self, v: f64) -> Result<(f64, f64)> {
        let r = self.sphere.radius_for_volume(v)?;
        let d = f64::from(self.sphere.dim());
        let area = self.sphere.ball_area(r.min(std::f64::consts::PI - r));
        // dA/dV = (d-1) cot r / √μ
        let slope = (d - 1.0) / r.tan() / self.sphere.mu().sqrt();
        Ok((self.c * area, self.c * slope))
    }
}

fn check_c(c: f64) -> Result<()> {
    if !(c >= 0.0 && c.is_finite()) {
        return invalid(format!("domination constant must be finite and non-negative, got {c}"));
    }
    Ok(())
}

fn record(
    interval: VolumeRange,
    method: RegimeMethod,
    left: &ProfileBound,
    margin: f64,
    compared: f64,
    witness: f64,
    justification: String,
) -> RegimeRecord {
    let relative_margin = if compared > 0.0 { margin / compared } else { f64::INFINITY };
    RegimeRecord {
        interval,
        method,
        bound: left.label.clone(),
        margin,
        relative_margin,
        witness,
        passed: margin > MARGIN_FLOOR * compared && margin.is_finite(),
        justification,
    }
}

fn ensure_range(bound: &ProfileBound, lo: f64, hi: f64) -> Result<()> {
    let r = bound.valid_range;
    if !(r.contains(lo) && r.contains(hi)) {
        return Err(Error::RegimeInapplicable(format!(
            "{} is valid on {r}, needed on [{lo}, {hi}]",
            bound.label
        )));
    }
    Ok(())
}

/// Small-volume regime on `(0, v_a]`.
pub fn certify_small_volume(left: &ProfileBound, right: &SphereMetricSpec, c: f64, v_a: f64, num: &Numerics) -> Result<RegimeRecord> {
    check_c(c)?;
    let d = right.dim();
    let exponent = (f64::from(d) - 1.0) / f64::from(d);
    if !left.ratio_non_increasing(exponent) {
        return Err(Error::RegimeInapplicable(format!(
            "{}: ratio to v^{exponent} is not known to be non-increasing",
            left.label
        )));
    }
    if !(v_a > 0.0) {
        return invalid(format!("small-volume end must be positive, got {v_a}"));
    }
    ensure_range(left, left.valid_range.lo.max(f64::MIN_POSITIVE), v_a)?;
    let scale = v_a.powf(exponent);
    let ratio = left.eval_with(v_a, num)? / scale;
    let target = c * euclidean_constant(d);
    Ok(record(
        VolumeRange::new(0.0, Some(v_a)),
        RegimeMethod::SmallVolume,
        left,
        (ratio - target) * scale,
        target * scale,
        v_a,
        format!(
            "left(v)/v^{exponent:.6} is non-increasing and equals {ratio:.9} at v = {v_a}; \
             the sphere ratio never exceeds gamma_{d}, and c gamma_{d} = {target:.9}"
        ),
    ))
}

/// Log-spaced nodes from `a` to `b` inclusive.
pub fn log_grid(a: f64, b: f64, nodes: usize) -> Vec<f64> {
    let n = nodes.max(2);
    let (la, lb) = (a.ln(), b.ln());
    let mut g: Vec<f64> = (0..n).map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp()).collect();
    g[0] = a;
    g[n - 1] = b;
    g
}

#[cfg(feature = "parallel")]
fn map_nodes<T: Send, F: Fn(f64) -> T + Sync + Send>(grid: &[f64], f: F) -> Vec<T> {
    use rayon::prelude::*;
    grid.par_iter().map(|&v| f(v)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_nodes<T, F: Fn(f64) -> T>(grid: &[f64], f: F) -> Vec<T> {
    grid.iter().map(|&v| f(v)).collect()
}

/// Grid-chord regime on `[grid[0], grid[last]]`.
pub fn certify_grid(left: &ProfileBound, right: &SphereMetricSpec, c: f64, grid: &[f64], num: &Numerics) -> Result<RegimeRecord> {
    check_c(c)?;
    if grid.len() < 2 {
        return invalid("grid needs at least two nodes");
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) || !(grid[0] > 0.0) {
        return invalid("grid nodes must be positive and strictly increasing");
    }
    if !left.is_concave() {
        return Err(Error::RegimeInapplicable(format!("{} is not known to be concave", left.label)));
    }
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    ensure_range(left, lo, hi)?;
    let target = Target { sphere: right, c };
    if hi >= target.total() {
        return Err(Error::RegimeInapplicable(format!(
            "grid end {hi} reaches the sphere's total volume {}",
            target.total()
        )));
    }

    let nodes = map_nodes(grid, |v| -> Result<(f64, f64, f64)> {
        let l = left.eval_with(v, num)?;
        let (r, s) = target.value_and_slope(v)?;
        Ok((l, r, s))
    });
    let nodes = nodes.into_iter().collect::<Result<Vec<_>>>()?;

    // (relative margin, margin, compared, volume) of the worst point seen
    let mut worst = (f64::INFINITY, f64::INFINITY, 0.0, lo);
    let mut consider = |margin: f64, compared: f64, v: f64| {
        let rel = if compared > 0.0 { margin / compared } else if margin > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        if rel < worst.0 || margin.is_nan() {
            worst = (rel, margin, compared, v);
        }
    };
    for (i, w) in grid.windows(2).enumerate() {
        let (v1, v2) = (w[0], w[1]);
        let (l1, r1, s1) = nodes[i];
        let (l2, r2, s2) = nodes[i + 1];
        consider(l1 - r1, r1, v1);
        consider(l2 - r2, r2, v2);
        // the two end tangents cross inside the cell when the slopes differ
        if s1 > s2 {
            let x = ((r2 - s2 * v2) - (r1 - s1 * v1)) / (s1 - s2);
            if x > v1 && x < v2 {
                let upper = r1 + s1 * (x - v1);
                let chord = l1 + (l2 - l1) * (x - v1) / (v2 - v1);
                consider(chord - upper, upper, x);
            }
        }
    }
    let (_, margin, compared, witness) = worst;
    Ok(record(
        VolumeRange::new(lo, Some(hi)),
        RegimeMethod::GridChord,
        left,
        margin,
        compared,
        witness,
        format!(
            "{} log-spaced nodes; on each cell the concave left bound lies above its chord \
             and the concave sphere profile below its end tangents",
            grid.len()
        ),
    ))
}

/// Line regime on `[from, to]`: an affine lower bound against the sphere.
pub fn certify_line_dominates_sphere(line: &ProfileBound, right: &SphereMetricSpec, c: f64, from: f64, to: f64, num: &Numerics) -> Result<RegimeRecord> {
    check_c(c)?;
    if !(from < to) {
        return invalid(format!("line regime needs from < to, got [{from}, {to}]"));
    }
    if line.line_coefficients().is_none() {
        return Err(Error::RegimeInapplicable(format!("{} is not affine", line.label)));
    }
    ensure_range(line, from, to)?;
    let target = Target { sphere: right, c };
    let total = target.total();
    let gap = |v: f64| -> f64 {
        let l = line.eval_with(v, num).unwrap_or(f64::NAN);
        let r = target.value(v).unwrap_or(f64::NAN);
        r - l
    };
    // c·I_sphere - line is concave where the sphere lives; past it only the
    // line remains, and an affine function is smallest at an end
    let mut worst = (f64::INFINITY, 1.0, from);
    let sphere_end = to.min(total);
    if from < sphere_end {
        let (x, g) = golden_section_max(gap, from, sphere_end, 1e-9 * (sphere_end - from).max(1.0));
        let compared = target.value(x)?;
        worst = (-g, compared, x);
    }
    if to > total {
        for v in [from.max(total), to] {
            let l = line.eval_with(v, num)?;
            if l < worst.0 {
                worst = (l, 0.0, v);
            }
        }
    }
    let (margin, compared, witness) = worst;
    if !margin.is_finite() {
        return Err(Error::RegimeInapplicable(format!("line regime produced a non-finite margin on [{from}, {to}]")));
    }
    Ok(record(
        VolumeRange::new(from, Some(to)),
        RegimeMethod::Line,
        line,
        margin,
        compared,
        witness,
        "c times the sphere profile minus an affine function is concave; its maximum located by golden-section search"
            .to_string(),
    ))
}

/// Tail regime on `[v_b, ∞)`.
pub fn certify_tail(left_tail: &ProfileBound, right: &SphereMetricSpec, c: f64, v_b: f64, num: &Numerics) -> Result<RegimeRecord> {
    check_c(c)?;
    if !left_tail.is_non_decreasing() {
        return Err(Error::RegimeInapplicable(format!("{} is not known to be non-decreasing", left_tail.label)));
    }
    if left_tail.valid_range.hi.is_some() || !left_tail.valid_range.contains(v_b) {
        return Err(Error::RegimeInapplicable(format!(
            "{} must be valid on [{v_b}, inf), is valid on {}",
            left_tail.label, left_tail.valid_range
        )));
    }
    let (_, peak) = right.peak();
    let l = left_tail.eval_with(v_b, num)?;
    let compared = c * peak;
    Ok(record(
        VolumeRange::from(v_b),
        RegimeMethod::Tail,
        left_tail,
        l - compared,
        compared,
        v_b,
        format!("left is non-decreasing and equals {l:.9} at v = {v_b}; c times the sphere maximum is {compared:.9}"),
    ))
}

/// How the affine bound of a line step is obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "from", rename_all = "kebab-case")]
pub enum LineSpec {
    Points { p1: (f64, f64), p2: (f64, f64) },
    /// Chord between `first(v1)` and `second(v2)`, two lower bounds of the
    /// same concave profile.
    Anchored { first: Box<ProfileBound>, v1: f64, second: Box<ProfileBound>, v2: f64 },
}

impl LineSpec {
    pub fn build(&self, num: &Numerics) -> Result<ProfileBound> {
        match self {
            Self::Points { p1, p2 } => chord_line(*p1, *p2),
            Self::Anchored { first, v1, second, v2 } => chord_between(first, *v1, second, *v2, num),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum PlanStep {
    SmallVolume { left: ProfileBound, until: f64 },
    GridChord { left: ProfileBound, from: f64, to: f64, #[serde(default)] nodes: Option<usize> },
    Line { line: LineSpec, from: f64, to: f64 },
    Tail { left: ProfileBound, from: f64 },
}

impl PlanStep {
    pub fn interval(&self) -> VolumeRange {
        match *self {
            Self::SmallVolume { until, .. } => VolumeRange::new(0.0, Some(until)),
            Self::GridChord { from, to, .. } | Self::Line { from, to, .. } => VolumeRange::new(from, Some(to)),
            Self::Tail { from, .. } => VolumeRange::from(from),
        }
    }
}

/// A claim `I_subject ≥ c · I_right` on `(0, range_end]` and the regimes
/// meant to prove it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationPlan {
    pub id: String,
    pub claim: String,
    pub subject: String,
    pub right: SphereMetricSpec,
    pub c: f64,
    /// `None` for all volumes.
    #[serde(default)]
    pub range_end: Option<f64>,
    pub steps: Vec<PlanStep>,
    #[serde(default)]
    pub provenance: Vec<String>,
}

impl DominationPlan {
    /// Checks the steps tile `(0, range_end]` without gaps or overlaps.
    pub fn check_coverage(&self) -> Result<()> {
        let first = self.steps.first().ok_or_else(|| Error::CoverageGap("plan has no steps".into()))?;
        if first.interval().lo != 0.0 {
            return Err(Error::CoverageGap(format!("(0, {}) not covered", first.interval().lo)));
        }
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
        for w in self.steps.windows(2) {
            let (a, b) = (w[0].interval(), w[1].interval());
            let Some(end) = a.hi else {
                return Err(Error::CoverageGap(format!("step after an unbounded regime starting at {}", b.lo)));
            };
            if !close(end, b.lo) {
                let (x, y) = if end < b.lo { (end, b.lo) } else { (b.lo, end) };
                let what = if end < b.lo { "not covered" } else { "covered twice" };
                return Err(Error::CoverageGap(format!("({x}, {y}) {what}")));
            }
        }
        let last = self.steps[self.steps.len() - 1].interval();
        match (self.range_end, last.hi) {
            (None, None) => Ok(()),
            (None, Some(hi)) => Err(Error::CoverageGap(format!("({hi}, inf) not covered"))),
            (Some(end), Some(hi)) if close(end, hi) => Ok(()),
            (Some(end), Some(hi)) if hi < end => Err(Error::CoverageGap(format!("({hi}, {end}) not covered"))),
            (Some(end), _) => Err(Error::CoverageGap(format!("plan extends past its range end {end}"))),
        }
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationCertificate {
    pub plan: String,
    pub claim: String,
    pub subject: String,
    pub right: SphereMetricSpec,
    pub c: f64,
    pub coverage: VolumeRange,
    pub regimes: Vec<RegimeRecord>,
    pub status: Status,
    pub provenance: Vec<String>,
}

impl DominationCertificate {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// First failing regime, if any.
    pub fn first_failure(&self) -> Option<&RegimeRecord> {
        self.regimes.iter().find(|r| !r.passed)
    }
}

fn run_step(step: &PlanStep, plan: &DominationPlan, num: &Numerics) -> Result<RegimeRecord> {
    let (right, c) = (&plan.right, plan.c);
    match step {
        PlanStep::SmallVolume { left, until } => certify_small_volume(left, right, c, *until, num),
        PlanStep::GridChord { left, from, to, nodes } => {
            let grid = log_grid(*from, *to, nodes.unwrap_or(num.grid_nodes));
            certify_grid(left, right, c, &grid, num)
        }
        PlanStep::Line { line, from, to } => {
            let line = line.build(num)?;
            certify_line_dominates_sphere(&line, right, c, *from, *to, num)
        }
        PlanStep::Tail { left, from } => certify_tail(left, right, c, *from, num),
    }
}

/// Runs every regime of `plan`. Coverage is checked before any numerics;
/// a regime whose preconditions fail is an error, a regime whose margin is
/// too small yields a failed certificate.
pub fn certify_domination(plan: &DominationPlan, num: &Numerics) -> Result<DominationCertificate> {
    check_c(plan.c)?;
    plan.check_coverage()?;
    #[cfg(feature = "parallel")]
    let regimes: Vec<Result<RegimeRecord>> = {
        use rayon::prelude::*;
        plan.steps.par_iter().map(|s| run_step(s, plan, num)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let regimes: Vec<Result<RegimeRecord>> = plan.steps.iter().map(|s| run_step(s, plan, num)).collect();
    let regimes = regimes.into_iter().collect::<Result<Vec<_>>>()?;
    let status = if regimes.iter().all(|r| r.passed) { Status::Pass } else { Status::Fail };
    Ok(DominationCertificate {
        plan: plan.id.clone(),
        claim: plan.claim.clone(),
        subject: plan.subject.clone(),
        right: plan.right,
        c: plan.c,
        coverage: VolumeRange::new(0.0, plan.range_end),
        regimes,
        status,
        provenance: plan.provenance.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundKind;

    fn sphere(d: i64, mu: f64) -> SphereMetricSpec {
        SphereMetricSpec::new(d, mu).unwrap()
    }

    #[test]
    fn sphere_slope_matches_difference_quotient() {
        let s = sphere(5, 2.5);
        let t = Target { sphere: &s, c: 1.0 };
        for v in [0.5, 40.0, 200.0] {
            let (_, slope) = t.value_and_slope(v).unwrap();
            let h = 1e-5 * v;
            let fd = (s.profile(v + h).unwrap() - s.profile(v - h).unwrap()) / (2.0 * h);
            assert!((slope - fd).abs() < 1e-6 * slope.abs().max(1.0), "{slope} {fd}");
        }
    }

    #[test]
    fn grid_compares_sphere_with_itself_scaled() {
        let s = sphere(4, 1.0);
        let left = ProfileBound::sphere(&s);
        let num = Numerics::default();
        let grid = log_grid(0.1, 20.0, 200);
        assert!(certify_grid(&left, &s, 0.9, &grid, &num).unwrap().passed);
        // equality sits below the floor
        assert!(!certify_grid(&left, &s, 1.0, &grid, &num).unwrap().passed);
    }

    #[test]
    fn grid_requires_concave_left() {
        let s = sphere(4, 1.0);
        let m = ProfileBound::new("m", BoundKind::MorganProduct { instance: crate::bounds::MorganInstance::S3xR2 }, VolumeRange::ALL);
        let err = certify_grid(&m, &s, 0.5, &[1.0, 2.0], &Numerics::default()).unwrap_err();
        assert!(matches!(err, Error::RegimeInapplicable(_)));
    }

    #[test]
    fn tail_needs_monotone_left() {
        let s = sphere(4, 1.0);
        let down = chord_line((1.0, 5.0), (2.0, 4.0)).unwrap();
        assert!(certify_tail(&down, &s, 0.5, 1.0, &Numerics::default()).is_err());
        let flat = ProfileBound::constant(100.0, VolumeRange::from(1.0));
        let r = certify_tail(&flat, &s, 1.0, 1.0, &Numerics::default()).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn line_beyond_sphere_volume() {
        let s = sphere(4, 1.0);
        let total = s.total_volume();
        let line = chord_line((1.0, 30.0), (2.0 * total, 40.0)).unwrap();
        let r = certify_line_dominates_sphere(&line, &s, 1.0, 1.0, 2.0 * total, &Numerics::default()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn coverage_gap_detected_before_numerics() {
        let s = sphere(4, 1.0);
        // the left bound would fail numerically; coverage must reject first
        let left = ProfileBound::constant(-1.0, VolumeRange::ALL);
        let plan = DominationPlan {
            id: "gap".into(),
            claim: String::new(),
            subject: String::new(),
            right: s,
            c: 1.0,
            range_end: Some(1.0),
            steps: vec![
                PlanStep::SmallVolume { left: left.clone(), until: 0.03 },
                PlanStep::GridChord { left, from: 0.04, to: 1.0, nodes: None },
            ],
            provenance: vec![],
        };
        match certify_domination(&plan, &Numerics::default()) {
            Err(Error::CoverageGap(m)) => assert!(m.contains("(0.03, 0.04)"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(0.03, 20.8576, 512);
        assert_eq!(g.len(), 512);
        assert_eq!(g[0], 0.03);
        assert_eq!(g[511], 20.8576);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
