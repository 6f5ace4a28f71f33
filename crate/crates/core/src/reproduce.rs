//! Plot data for the comparison figures, the α/β regression table and a
//! pass/fail summary of the reproducible numerical claims.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::bounds::{morgan_power_law, morgan_product_bound, MorganInstance, Numerics, ProfileBound};
use crate::cylinder::CylinderProfile;
use crate::error::{invalid, Result};
use crate::geometry::{gamma, SphereMetricSpec};
use crate::plans::{builtin_plan, certify_builtin, PLAN_NAMES};
use crate::yamabe::{reproduce_headlines, yamabe_sphere, HeadlineRow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub label: String,
    /// `(volume, area)` samples.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    pub id: String,
    pub range: (f64, f64),
    pub curves: Vec<Curve>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureData {
    pub id: String,
    pub caption: String,
    pub panels: Vec<Panel>,
}

pub const FIGURE_IDS: [&str; 9] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"];

/// A curve to sample: a profile bound, optionally multiplied by a constant.
struct Source {
    label: String,
    bound: ProfileBound,
    factor: f64,
}

impl Source {
    fn new(bound: ProfileBound, factor: f64) -> Self {
        let label = if factor == 1.0 { bound.label.clone() } else { format!("{factor:.9} x {}", bound.label) };
        Self { label, bound, factor }
    }

    fn sphere(spec: &SphereMetricSpec, c: f64) -> Self {
        Self::new(ProfileBound::sphere(spec), c)
    }

    fn sample(&self, lo: f64, hi: f64, samples: usize, num: &Numerics) -> Result<Curve> {
        let n = samples.max(2);
        let mut points = Vec::with_capacity(n);
        for i in 0..n {
            let v = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let r = self.bound.valid_range;
            // sphere profiles vanish at the total volume; other bounds are
            // only drawn where they are valid
            let y = match r.hi {
                Some(top) if v >= top && matches!(self.bound.kind, crate::bounds::BoundKind::SphereExact { .. }) => 0.0,
                _ if !r.contains(v) || v <= 0.0 => continue,
                _ => self.bound.eval_with(v, num)?,
            };
            points.push((v, self.factor * y));
        }
        Ok(Curve { label: self.label.clone(), points })
    }
}

fn panels(id: &str, ranges: &[(f64, f64)], sources: &[Source], samples: usize, num: &Numerics) -> Result<Vec<Panel>> {
    let suffix = |i: usize| if ranges.len() == 1 { String::new() } else { ((b'a' + i as u8) as char).to_string() };
    ranges
        .iter()
        .enumerate()
        .map(|(i, &(lo, hi))| {
            Ok(Panel {
                id: format!("{id}{}", suffix(i)),
                range: (lo, hi),
                curves: sources.iter().map(|s| s.sample(lo, hi, samples, num)).collect::<Result<_>>()?,
            })
        })
        .collect()
}

fn plan_sides(name: &str, num: &Numerics) -> Result<(ProfileBound, SphereMetricSpec, f64)> {
    let plan = builtin_plan(name, num)?;
    let left = match &plan.steps[1] {
        crate::certify::PlanStep::GridChord { left, .. } => left.clone(),
        _ => return invalid(format!("plan {name} has no grid regime")),
    };
    Ok((left, plan.right, plan.c))
}

fn line_of(name: &str, num: &Numerics) -> Result<ProfileBound> {
    let plan = builtin_plan(name, num)?;
    for step in &plan.steps {
        if let crate::certify::PlanStep::Line { line, .. } = step {
            return line.build(num);
        }
    }
    invalid(format!("plan {name} has no line regime"))
}

/// Left and right curves of one figure on its volume ranges.
pub fn figure(id: &str, samples: usize, num: &Numerics) -> Result<FigureData> {
    let cylinder_figure = |plan: &str, ranges: &[(f64, f64)], caption: String| -> Result<FigureData> {
        let (left, right, c) = plan_sides(plan, num)?;
        let sources = [Source::new(left, 1.0), Source::sphere(&right, c)];
        Ok(FigureData { id: id.to_string(), caption, panels: panels(id, ranges, &sources, samples, num)? })
    };
    let sphere_end = |name: &str| -> Result<f64> { Ok(builtin_plan(name, num)?.right.total_volume()) };
    match id {
        "fig1" => cylinder_figure(
            "lemma3.1",
            &[(2.0, sphere_end("lemma3.1")?), (0.3, 2.0), (0.1, 0.3), (0.03, 0.1)],
            "I(S^3 x R) against 0.99 I(S^4, 2^(2/3) g0), v >= 0.03".into(),
        ),
        "fig2" => cylinder_figure(
            "lemma3.4",
            &[(4.0, 80.0)],
            "I(S^4 x R, 2^(2/3)(g0+dx^2)) against (sqrt(3)/2)/0.99 I(S^5, 5/2 g0), 4 <= v <= 80".into(),
        ),
        "fig3" => {
            let (ros, _, _) = plan_sides("thm1.3", num)?;
            let sources = [
                Source::new(ros, 1.0),
                Source::new(morgan_power_law(MorganInstance::S3xR2)?, 1.0),
                Source::new(line_of("thm1.3", num)?, 1.0),
            ];
            Ok(FigureData {
                id: id.into(),
                caption: "the line l joins two lower bounds for I(S^3 x R^2)".into(),
                panels: panels(id, &[(16.0, 500.0)], &sources, samples, num)?,
            })
        }
        "fig4" => {
            let (_, right, c) = plan_sides("thm1.3", num)?;
            let sources = [Source::new(line_of("thm1.3", num)?, 1.0), Source::sphere(&right, c)];
            Ok(FigureData {
                id: id.into(),
                caption: "the line l lies above (sqrt(3)/2) I(S^5, 5/2 g0) for v >= 80".into(),
                panels: panels(id, &[(80.0, 450.0)], &sources, samples, num)?,
            })
        }
        "fig5" => cylinder_figure(
            "lemma4.2",
            &[(100.0, 427.0)],
            "I(S^4 x R, 2^(5/3)(g0+dx^2)) against (3 sqrt(7)/9.9) I(S^5, 6.3 g0), 100 <= v <= 427".into(),
        ),
        "fig6" => {
            let (_, right, c) = plan_sides("thm1.2", num)?;
            let sources = [Source::new(line_of("thm1.2", num)?, 1.0), Source::sphere(&right, c)];
            Ok(FigureData {
                id: id.into(),
                caption: "the line f lies above (3 sqrt(7)/10) I(S^5, 6.3 g0) on [427.18, 1500]".into(),
                panels: panels(id, &[(427.18, 1500.0)], &sources, samples, num)?,
            })
        }
        "fig7" => cylinder_figure(
            "lemma5.1-k7",
            &[(1.9, sphere_end("lemma5.1-k7")?), (0.078, 1.9), (0.005, 0.078)],
            "I(S^7 x R) against 0.94 I(S^8, 2^(2/7) g0), v >= 0.005".into(),
        ),
        "fig8" => cylinder_figure(
            "lemma5.1-k8",
            &[(0.591, sphere_end("lemma5.1-k8")?), (0.0068, 0.591)],
            "I(S^8 x R) against 0.92 I(S^9, 2^(1/4) g0), v >= 0.0068".into(),
        ),
        "fig9" => cylinder_figure(
            "lemma5.1-k9",
            &[(0.028, sphere_end("lemma5.1-k9")?), (0.0018, 0.028)],
            "I(S^9 x R) against 0.86 I(S^10, 2^(2/9) g0), v >= 0.0018".into(),
        ),
        other => invalid(format!("unknown figure {other:?}; known: {}", FIGURE_IDS.join(", "))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaBetaRow {
    pub k: u32,
    pub alpha: f64,
    pub beta: f64,
    /// `I_{S^k×ℝ}(α)/α^{k/(k+1)}`.
    pub ratio: f64,
    /// `β γ_{k+1}`.
    pub target: f64,
    pub published_ratio: f64,
    pub published_target: f64,
    pub holds: bool,
    /// Computed values agree with the published ones within 0.02.
    pub matches_published: bool,
}

const PUBLISHED_ALPHA_BETA: [(u32, f64, f64, f64, f64); 3] = [
    (7, 0.0052, 0.94, 9.04, 8.96),
    (8, 0.0068, 0.92, 9.51, 9.45),
    (9, 0.0018, 0.86, 9.49, 9.44),
];

pub fn alpha_beta_table(num: &Numerics) -> Result<Vec<AlphaBetaRow>> {
    PUBLISHED_ALPHA_BETA
        .iter()
        .map(|&(k, alpha, beta, pr, pt)| {
            let profile = CylinderProfile::shared_with(i64::from(k), num.tol)?;
            let e = f64::from(k) / f64::from(k + 1);
            let ratio = profile.profile_unit(alpha)? / alpha.powf(e);
            let target = beta * gamma(i64::from(k + 1))?;
            Ok(AlphaBetaRow {
                k,
                alpha,
                beta,
                ratio,
                target,
                published_ratio: pr,
                published_target: pt,
                holds: ratio > target,
                matches_published: (ratio - pr).abs() <= 0.02 && (target - pt).abs() <= 0.02,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

fn criterion(id: u32, title: &str, passed: bool, detail: String) -> CriterionResult {
    CriterionResult { id, title: title.to_string(), passed, detail }
}

/// Everything `reproduce` reports besides plot data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub headlines: Vec<HeadlineRow>,
    pub alpha_beta: Vec<AlphaBetaRow>,
    pub certificates: Vec<crate::certify::DominationCertificate>,
    pub criteria: Vec<CriterionResult>,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Runs every certificate and evaluates criteria 1 to 8; criterion 9 is
/// the property test suite and is only reported as such.
pub fn summary(num: &Numerics) -> Result<Summary> {
    let mut criteria = Vec::new();

    let g4 = gamma(4)?;
    let g5 = gamma(5)?;
    let (g8, g9, g10) = (gamma(8)?, gamma(9)?, gamma(10)?);
    let ok = rel(g4, 2f64.powf(1.75) * PI.sqrt()) < 1e-12
        && rel(g5, (8.0 * PI * PI / 3.0).powf(0.2) * 5f64.powf(0.8)) < 1e-12
        && (g8 - 9.5310).abs() < 5e-5
        && (g9 - 10.2762).abs() < 5e-5
        && (g10 - 10.9814).abs() < 5e-5;
    criteria.push(criterion(1, "sphere constants", ok, format!("gamma_4..5 = {g4:.12}, {g5:.12}; gamma_8..10 = {g8:.4}, {g9:.4}, {g10:.4}")));

    let y5 = yamabe_sphere(5)?;
    criteria.push(criterion(2, "Yamabe constant of S^5", (y5 - 78.997).abs() <= 1e-3, format!("Y(S^5) = {y5:.6}")));

    let c3 = CylinderProfile::shared_with(3, num.tol)?;
    let c4 = CylinderProfile::shared_with(4, num.tol)?;
    let r1 = c3.profile_unit(0.03)? / 0.03f64.powf(0.75);
    let r2 = c4.profile(2f64.powf(2.0 / 3.0), 4.0)? / 4f64.powf(0.8);
    let r3 = c4.profile(2f64.powf(5.0 / 3.0), 100.0)? / 100f64.powf(0.8);
    let table = alpha_beta_table(num)?;
    let mut ok = (r1 - 5.904).abs() <= 5e-3 && (r2 - 6.2585).abs() <= 5e-3 && (r3 - 5.6106).abs() <= 5e-3;
    let mut detail = format!("ratios {r1:.5}, {r2:.5}, {r3:.5}");
    for row in &table {
        ok &= (row.ratio - row.published_ratio).abs() <= 0.02;
        detail.push_str(&format!("; k={} {:.4} (published {})", row.k, row.ratio, row.published_ratio));
    }
    criteria.push(criterion(3, "ball-type region regressions", ok, detail));

    let area = c3.section_area();
    let eta_area = c3.region(c3.eta_star())?.area;
    criteria.push(criterion(
        4,
        "crossover volume",
        (c3.v0() - 20.8576).abs() <= 0.01 && rel(eta_area, area) <= 1e-6,
        format!("v0(3) = {:.6}, area at eta* = {eta_area:.10}, 4 pi^2 = {area:.10}", c3.v0()),
    ));

    let s = SphereMetricSpec::new(5, 6.3)?;
    let (pv, pa) = s.peak();
    let pa = 3.0 * 7f64.sqrt() / 10.0 * pa;
    criteria.push(criterion(
        5,
        "peak of the scaled S^5 profile",
        (pa - 829.12).abs() <= 0.5 && (pv - 1544.44).abs() <= 0.5,
        format!("max {pa:.4} at v = {pv:.4}"),
    ));

    #[cfg(feature = "parallel")]
    let certificates: Vec<Result<_>> = {
        use rayon::prelude::*;
        PLAN_NAMES.par_iter().map(|n| certify_builtin(n, num)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let certificates: Vec<Result<_>> = PLAN_NAMES.iter().map(|n| certify_builtin(n, num)).collect();
    let certificates = certificates.into_iter().collect::<Result<Vec<_>>>()?;
    let failed: Vec<&str> = certificates.iter().filter(|c| !c.passed()).map(|c| c.plan.as_str()).collect();
    criteria.push(criterion(
        6,
        "domination certificates",
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} certificates pass", certificates.len())
        } else {
            format!("failing: {}", failed.join(", "))
        },
    ));

    let mut ok = true;
    let mut worst: f64 = 0.0;
    for v in [16.0, 100.0, 1000.0] {
        let m = morgan_product_bound(MorganInstance::S3xR2.factors(), v)?;
        let e = rel(m.bound, (2.0 * PI).powf(1.5) / 2f64.sqrt() * v.sqrt());
        worst = worst.max(e);
        ok &= e <= 1e-6;
    }
    for v in [27.0, 200.0] {
        let m = morgan_product_bound(MorganInstance::S2xR3.factors(), v)?;
        let e = rel(m.bound, 2f64.powf(5.0 / 6.0) * (3.0 * PI).powf(2.0 / 3.0) * v.powf(2.0 / 3.0));
        worst = worst.max(e);
        ok &= e <= 1e-6;
    }
    let aux = [MorganInstance::S3xR2, MorganInstance::S2xR3].map(crate::bounds::verify_auxiliary_min);
    ok &= aux.iter().all(|a| a.is_ok());
    criteria.push(criterion(7, "Morgan bounds", ok, format!("worst relative deviation from the power laws {worst:.2e}")));

    let headlines = match reproduce_headlines(&certificates) {
        Ok(rows) => rows,
        Err(e) => {
            criteria.push(criterion(8, "headline table", false, e.to_string()));
            return Ok(Summary { headlines: Vec::new(), alpha_beta: table, certificates, criteria });
        }
    };
    let ok = headlines.iter().all(|r| r.agrees_with_published) && headlines[4].ratio > 0.59;
    let detail = headlines
        .iter()
        .map(|r| format!("{} {:.6}", r.space, r.ratio))
        .collect::<Vec<_>>()
        .join("; ");
    criteria.push(criterion(8, "headline table", ok, detail));

    Ok(Summary { headlines, alpha_beta: table, certificates, criteria })
}

/// Anchors used by the chord lines, for the record.
pub fn chord_lines(num: &Numerics) -> Result<Vec<(String, ProfileBound)>> {
    let mut out = Vec::new();
    for name in ["thm1.3", "thm1.2"] {
        let plan = builtin_plan(name, num)?;
        for step in &plan.steps {
            if let crate::certify::PlanStep::Line { line, .. } = step {
                out.push((name.to_string(), line.build(num)?));
            }
        }
    }
    Ok(out)
}
