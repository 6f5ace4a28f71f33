//! Built-in domination plans for the comparisons behind the Yamabe
//! estimates.
//!
//! Each plan is assembled from exact profiles, Ros compositions of earlier
//! dominations and the Morgan estimates; its provenance lists the chain.

use std::f64::consts::PI;

use crate::bounds::{morgan_power_law, Domination, MorganInstance, Numerics, ProfileBound, Space, VolumeRange};
use crate::certify::{certify_domination, DominationCertificate, DominationPlan, LineSpec, PlanStep};
use crate::cylinder::CylinderProfile;
use crate::error::{invalid, Result};
use crate::geometry::{unit_sphere_volume, SphereMetricSpec};
use crate::special::sphere_volume;

/// Names accepted by [`builtin_plan`].
pub const PLAN_NAMES: [&str; 10] = [
    "lemma3.1",
    "lemma3.4",
    "thm1.3",
    "lemma4.2",
    "thm1.2",
    "lemma5.1-k7",
    "lemma5.1-k8",
    "lemma5.1-k9",
    "cor5.2-k7",
    "cor5.2-k8",
];

/// `(k, α_k, β_k)`: below `α_k` the small-volume argument applies and
/// `I_{S^k×ℝ} ≥ β_k I_{(S^{k+1}, 2^{2/k} g₀)}` holds everywhere.
pub const ALPHA_BETA: [(u32, f64, f64); 3] = [(7, 0.0052, 0.94), (8, 0.0068, 0.92), (9, 0.0018, 0.86)];

/// Chord anchor on the Ros bound for `S³ × ℝ²`.
pub const S3_ANCHOR: f64 = 75.517;
/// Where the `S³ × ℝ²` chord meets the Morgan power law.
pub const S3_MORGAN_JOIN: f64 = 450.0;
/// Chord anchor on the Ros bound for `S² × ℝ³`.
pub const S2_ANCHOR: f64 = 427.18;
/// Where the `S² × ℝ³` chord meets the Morgan power law.
pub const S2_MORGAN_JOIN: f64 = 1500.0;

pub fn alpha_beta(k: u32) -> Result<(f64, f64)> {
    ALPHA_BETA
        .iter()
        .find(|row| row.0 == k)
        .map(|&(_, a, b)| (a, b))
        .ok_or_else(|| crate::Error::InvalidArgument(format!("no alpha/beta entry for k = {k}")))
}

fn crossover_volume(k: u32, num: &Numerics) -> Result<f64> {
    Ok(CylinderProfile::shared_with(i64::from(k), num.tol)?.v0())
}

fn sphere(dim: u32, mu: f64) -> Result<SphereMetricSpec> {
    SphereMetricSpec::new(i64::from(dim), mu)
}

/// `I_{S³×ℝ} ≥ 0.99 I_{(S⁴, 2^{2/3} g₀)}`, certified by [`lemma_3_1`].
pub fn lemma_3_1_domination() -> Domination {
    Domination::new(
        Space::product(3, 1, 1.0),
        0.99,
        Space::sphere(4, 2f64.powf(2.0 / 3.0)),
        "certified: I(S^3 x R) >= 0.99 I(S^4, 2^(2/3) g0) [lemma3.1]",
    )
}

/// `I_{S^k×ℝ} ≥ β_k I_{(S^{k+1}, 2^{2/k} g₀)}`, certified by [`lemma_5_1`].
pub fn lemma_5_1_domination(k: u32) -> Result<Domination> {
    let (_, beta) = alpha_beta(k)?;
    Ok(Domination::new(
        Space::product(k, 1, 1.0),
        beta,
        Space::sphere(k + 1, 2f64.powf(2.0 / f64::from(k))),
        format!("certified: I(S^{k} x R) >= {beta} I(S^{}, 2^(2/{k}) g0) [lemma5.1-k{k}]", k + 1),
    ))
}

/// `I_{S²×ℝ³} ≥ 0.99 I_{(S⁴×ℝ, 2^{5/3}(g₀+dx²))}`.
pub fn s2_chain() -> Result<Domination> {
    let cited = Domination::new(
        Space::product(2, 1, 1.0),
        1.0,
        Space::sphere(3, 2.0),
        "cited: I(S^2 x R) >= I(S^3, 2 g0), from the classification of isoperimetric regions in S^2 x R",
    );
    let doubled = lemma_3_1_domination().rescale(2.0).ros_compose();
    cited.ros_compose().ros_compose().chain(&doubled)
}

pub fn lemma_3_1(num: &Numerics) -> Result<DominationPlan> {
    let v0 = crossover_volume(3, num)?;
    let left = ProfileBound::cylinder(3, 1.0);
    let section = ProfileBound::constant(4.0 * PI * PI, VolumeRange::from(v0))
        .with_provenance("cylinder profile equals the section area 2 V_3 = 4 pi^2 beyond v0");
    Ok(DominationPlan {
        id: "lemma3.1".into(),
        claim: "I(S^3 x R) >= 0.99 I(S^4, 2^(2/3) g0) for all volumes".into(),
        subject: "(S^3 x R, g0 + dx^2)".into(),
        right: sphere(4, 2f64.powf(2.0 / 3.0))?,
        c: 0.99,
        range_end: None,
        steps: vec![
            PlanStep::SmallVolume { left: left.clone(), until: 0.03 },
            PlanStep::GridChord { left, from: 0.03, to: v0, nodes: None },
            PlanStep::Tail { left: section, from: v0 },
        ],
        provenance: vec!["exact profile of S^3 x R".into()],
    })
}

pub fn lemma_3_4(_num: &Numerics) -> Result<DominationPlan> {
    let mu = 2f64.powf(2.0 / 3.0);
    let left = ProfileBound::cylinder(4, mu);
    Ok(DominationPlan {
        id: "lemma3.4".into(),
        claim: "I(S^4 x R, 2^(2/3)(g0+dx^2)) >= (sqrt(3)/2)/0.99 I(S^5, 5/2 g0) for v <= 80".into(),
        subject: "(S^4 x R, 2^(2/3)(g0 + dx^2))".into(),
        right: sphere(5, 2.5)?,
        c: 3f64.sqrt() / 2.0 / 0.99,
        range_end: Some(80.0),
        steps: vec![
            PlanStep::SmallVolume { left: left.clone(), until: 4.0 },
            PlanStep::GridChord { left, from: 4.0, to: 80.0, nodes: None },
        ],
        provenance: vec!["exact profile of S^4 x R, scaled".into()],
    })
}

pub fn theorem_1_3(num: &Numerics) -> Result<DominationPlan> {
    let chain = lemma_3_1_domination().ros_compose();
    let left = chain.to_profile_bound()?;
    let morgan = morgan_power_law(MorganInstance::S3xR2)?;
    let mut provenance = chain.provenance.clone();
    provenance.extend(morgan.provenance.iter().cloned());
    let _ = num;
    Ok(DominationPlan {
        id: "thm1.3".into(),
        claim: "I(S^3 x R^2) >= (sqrt(3)/2) I(S^5, 5/2 g0) for all volumes".into(),
        subject: "(S^3 x R^2, g0 + dx^2)".into(),
        right: sphere(5, 2.5)?,
        c: 3f64.sqrt() / 2.0,
        range_end: None,
        steps: vec![
            PlanStep::SmallVolume { left: left.clone(), until: 4.0 },
            PlanStep::GridChord { left: left.clone(), from: 4.0, to: 80.0, nodes: None },
            PlanStep::Line {
                line: LineSpec::Anchored { first: Box::new(left), v1: S3_ANCHOR, second: Box::new(morgan.clone()), v2: S3_MORGAN_JOIN },
                from: 80.0,
                to: S3_MORGAN_JOIN,
            },
            PlanStep::Tail { left: morgan, from: S3_MORGAN_JOIN },
        ],
        provenance,
    })
}

pub fn lemma_4_2(_num: &Numerics) -> Result<DominationPlan> {
    let left = ProfileBound::cylinder(4, 2f64.powf(5.0 / 3.0));
    Ok(DominationPlan {
        id: "lemma4.2".into(),
        claim: "I(S^4 x R, 2^(5/3)(g0+dx^2)) >= (3 sqrt(7)/9.9) I(S^5, 6.3 g0) for v <= 427".into(),
        subject: "(S^4 x R, 2^(5/3)(g0 + dx^2))".into(),
        right: sphere(5, 6.3)?,
        c: 3.0 * 7f64.sqrt() / 9.9,
        range_end: Some(427.0),
        steps: vec![
            PlanStep::SmallVolume { left: left.clone(), until: 100.0 },
            PlanStep::GridChord { left, from: 100.0, to: 427.0, nodes: None },
        ],
        provenance: vec!["exact profile of S^4 x R, scaled".into()],
    })
}

pub fn theorem_1_2(_num: &Numerics) -> Result<DominationPlan> {
    let chain = s2_chain()?;
    let left = chain.to_profile_bound()?;
    let morgan = morgan_power_law(MorganInstance::S2xR3)?;
    let mut provenance = chain.provenance.clone();
    provenance.extend(morgan.provenance.iter().cloned());
    Ok(DominationPlan {
        id: "thm1.2".into(),
        claim: "I(S^2 x R^3) >= (3 sqrt(7)/10) I(S^5, 6.3 g0) for all volumes".into(),
        subject: "(S^2 x R^3, g0 + dx^2)".into(),
        right: sphere(5, 6.3)?,
        c: 3.0 * 7f64.sqrt() / 10.0,
        range_end: None,
        steps: vec![
            PlanStep::SmallVolume { left: left.clone(), until: 100.0 },
            PlanStep::GridChord { left: left.clone(), from: 100.0, to: S2_ANCHOR, nodes: None },
            PlanStep::Line {
                line: LineSpec::Anchored { first: Box::new(left), v1: S2_ANCHOR, second: Box::new(morgan.clone()), v2: S2_MORGAN_JOIN },
                from: S2_ANCHOR,
                to: S2_MORGAN_JOIN,
            },
            PlanStep::Tail { left: morgan, from: S2_MORGAN_JOIN },
        ],
        provenance,
    })
}

pub fn lemma_5_1(k: u32, num: &Numerics) -> Result<DominationPlan> {
    let (alpha, beta) = alpha_beta(k)?;
    let v0 = crossover_volume(k, num)?;
    let left = ProfileBound::cylinder(k, 1.0);
    let section_area = 2.0 * unit_sphere_volume(i64::from(k))?;
    let section = ProfileBound::constant(section_area, VolumeRange::from(v0))
        .with_provenance(format!("cylinder profile equals the section area 2 V_{k} beyond v0"));
    Ok(DominationPlan {
        id: format!("lemma5.1-k{k}"),
        claim: format!("I(S^{k} x R) >= {beta} I(S^{}, 2^(2/{k}) g0) for all volumes", k + 1),
        subject: format!("(S^{k} x R, g0 + dx^2)"),
        right: sphere(k + 1, 2f64.powf(2.0 / f64::from(k)))?,
        c: beta,
        range_end: None,
        steps: vec![
            PlanStep::SmallVolume { left: left.clone(), until: alpha },
            PlanStep::GridChord { left, from: alpha, to: v0, nodes: None },
            PlanStep::Tail { left: section, from: v0 },
        ],
        provenance: vec![format!("exact profile of S^{k} x R")],
    })
}

/// `I_{S^n×ℝ²} ≥ β_n β_{n+1} I_{(S^{n+2}, 2^{2/n} 2^{2/(n+1)} g₀)}`.
pub fn corollary_5_2(n: u32, num: &Numerics) -> Result<DominationPlan> {
    let (_, beta_n) = alpha_beta(n)?;
    let (alpha_next, beta_next) = alpha_beta(n + 1)?;
    let chain = lemma_5_1_domination(n)?.ros_compose();
    let left = chain.to_profile_bound()?;
    // left is beta_n times the profile of S^{n+1} x R scaled by s
    let s = 2f64.powf(2.0 / f64::from(n));
    let d = f64::from(n + 1);
    let volume_scale = s.powf((d + 1.0) / 2.0);
    let v0 = volume_scale * crossover_volume(n + 1, num)?;
    let small_end = volume_scale * alpha_next;
    let plateau = beta_n * s.powf(d / 2.0) * 2.0 * sphere_volume(n + 1);
    let tail = ProfileBound::constant(plateau, VolumeRange::from(v0))
        .with_provenance(format!("value of {} beyond its crossover", left.label));
    let mut provenance = chain.provenance.clone();
    provenance.push(format!("lemma5.1-k{} rescaled by 2^(2/{n})", n + 1));
    Ok(DominationPlan {
        id: format!("cor5.2-k{n}"),
        claim: format!(
            "I(S^{n} x R^2) >= {} I(S^{}, 2^(2/{n}) 2^(2/{}) g0) for all volumes",
            beta_n * beta_next,
            n + 2,
            n + 1
        ),
        subject: format!("(S^{n} x R^2, g0 + dx^2)"),
        right: sphere(n + 2, s * 2f64.powf(2.0 / d))?,
        c: beta_n * beta_next,
        range_end: None,
        steps: vec![
            PlanStep::SmallVolume { left: left.clone(), until: small_end },
            PlanStep::GridChord { left, from: small_end, to: v0, nodes: None },
            PlanStep::Tail { left: tail, from: v0 },
        ],
        provenance,
    })
}

pub fn builtin_plan(name: &str, num: &Numerics) -> Result<DominationPlan> {
    match name {
        "lemma3.1" => lemma_3_1(num),
        "lemma3.4" => lemma_3_4(num),
        "thm1.3" => theorem_1_3(num),
        "lemma4.2" => lemma_4_2(num),
        "thm1.2" => theorem_1_2(num),
        "lemma5.1-k7" => lemma_5_1(7, num),
        "lemma5.1-k8" => lemma_5_1(8, num),
        "lemma5.1-k9" => lemma_5_1(9, num),
        "cor5.2-k7" => corollary_5_2(7, num),
        "cor5.2-k8" => corollary_5_2(8, num),
        other => invalid(format!("unknown plan {other:?}; known plans: {}", PLAN_NAMES.join(", "))),
    }
}

pub fn certify_builtin(name: &str, num: &Numerics) -> Result<DominationCertificate> {
    certify_domination(&builtin_plan(name, num)?, num)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_plan_has_full_coverage() {
        let num = Numerics::default();
        for name in PLAN_NAMES {
            builtin_plan(name, &num).unwrap().check_coverage().unwrap();
        }
        assert!(builtin_plan("thm9.9", &num).is_err());
    }

    #[test]
    fn every_builtin_plan_certifies() {
        let num = Numerics::default();
        for name in PLAN_NAMES {
            let cert = certify_builtin(name, &num).unwrap();
            for r in &cert.regimes {
                println!("{name:12} {:13} {:>24} margin {:.6e} rel {:.3e} at {:.6}", r.method.to_string(), r.interval.to_string(), r.margin, r.relative_margin, r.witness);
            }
            assert!(cert.passed(), "{name}: {:?}", cert.first_failure());
        }
    }

    #[test]
    fn s2_chain_lands_on_scaled_s4_cylinder() {
        let d = s2_chain().unwrap();
        assert_eq!(d.subject, Space::product(2, 3, 1.0));
        assert_eq!(d.model.sphere_dim, 4);
        assert!((d.model.mu - 2f64.powf(5.0 / 3.0)).abs() < 1e-14);
        assert!((d.lambda - 0.99).abs() < 1e-15);
    }
}
