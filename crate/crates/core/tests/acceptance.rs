//! Acceptance criteria 1 to 9, one printed line each. Runs without the
//! libtest harness so the report is always shown.

mod common;

use std::f64::consts::PI;

use isoprofile::bounds::{morgan_product_bound, verify_auxiliary_min, MorganInstance, Numerics, ProfileBound};
use isoprofile::certify::{certify_domination, DominationPlan, PlanStep};
use isoprofile::cylinder::{ball_region, ball_region_crosscheck, CylinderProfile};
use isoprofile::geometry::{gamma, SphereMetricSpec};
use isoprofile::plans::{builtin_plan, PLAN_NAMES};
use isoprofile::quad::Tolerance;
use isoprofile::reproduce::alpha_beta_table;
use isoprofile::yamabe::{bound_theorem_1_1, bound_theorem_1_7, reproduce_headlines_with, yamabe_sphere, YamabeBoundInput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

struct Report {
    lines: Vec<(u32, bool, String)>,
}

impl Report {
    fn record(&mut self, id: u32, passed: bool, detail: String) {
        println!("criterion {id}: {} ({detail})", if passed { "PASS" } else { "FAIL" });
        self.lines.push((id, passed, detail));
    }
}

fn criterion_1(r: &mut Report) {
    let g4 = gamma(4).unwrap();
    let g5 = gamma(5).unwrap();
    let e4 = rel(g4, 2f64.powf(1.75) * PI.sqrt());
    let e5 = rel(g5, (8.0 * PI * PI / 3.0).powf(0.2) * 5f64.powf(0.8));
    let mut ok = e4 <= 1e-12 && e5 <= 1e-12;
    let mut detail = format!("gamma_4 rel err {e4:.1e}, gamma_5 rel err {e5:.1e}");
    for (n, printed) in [(8, 9.5310), (9, 10.2762), (10, 10.9814)] {
        let g = gamma(n).unwrap();
        ok &= (g - printed).abs() < 5e-5 && rel(g, common::euclidean_constant(n as u32)) < 1e-12;
        detail.push_str(&format!("; gamma_{n} = {g:.4}"));
    }
    r.record(1, ok, detail);
}

fn criterion_2(r: &mut Report) {
    let y = yamabe_sphere(5).unwrap();
    let oracle = 20.0 * common::sphere_volume(5).powf(0.4);
    r.record(2, (y - 78.997).abs() <= 1e-3 && rel(y, oracle) < 1e-12, format!("Y(S^5) = {y:.6}"));
}

/// Returns whether everything except the k = 9 table row holds, and that
/// row's verdict.
fn criterion_3(r: &mut Report, num: &Numerics) -> (bool, bool) {
    let c3 = CylinderProfile::shared_with(3, num.tol).unwrap();
    let c4 = CylinderProfile::shared_with(4, num.tol).unwrap();
    let cases = [
        (c3.profile(1.0, 0.03).unwrap() / 0.03f64.powf(0.75), common::pedrosa_profile(3, 1.0, 0.03) / 0.03f64.powf(0.75), 5.904),
        (
            c4.profile(2f64.powf(2.0 / 3.0), 4.0).unwrap() / 4f64.powf(0.8),
            common::pedrosa_profile(4, 2f64.powf(2.0 / 3.0), 4.0) / 4f64.powf(0.8),
            6.2585,
        ),
        (
            c4.profile(2f64.powf(5.0 / 3.0), 100.0).unwrap() / 100f64.powf(0.8),
            common::pedrosa_profile(4, 2f64.powf(5.0 / 3.0), 100.0) / 100f64.powf(0.8),
            5.6106,
        ),
    ];
    let mut rest_ok = true;
    let mut detail = String::from("ratios");
    for (got, oracle, printed) in cases {
        rest_ok &= (got - printed).abs() <= 5e-3 && rel(got, oracle) < 1e-8;
        detail.push_str(&format!(" {got:.4}"));
    }
    let mut k9_ok = true;
    for row in alpha_beta_table(num).unwrap() {
        let e = row.k as f64 / (row.k as f64 + 1.0);
        let oracle = common::pedrosa_profile(row.k, 1.0, row.alpha) / row.alpha.powf(e);
        let ok = (row.ratio - row.published_ratio).abs() <= 0.02 && rel(row.ratio, oracle) < 1e-8;
        if row.k == 9 {
            k9_ok = ok;
        } else {
            rest_ok &= ok;
        }
        detail.push_str(&format!("; k={} {:.4} vs printed {}", row.k, row.ratio, row.published_ratio));
    }
    r.record(3, rest_ok && k9_ok, detail);
    (rest_ok, k9_ok)
}

fn criterion_4(r: &mut Report, num: &Numerics) {
    let p = CylinderProfile::shared_with(3, num.tol).unwrap();
    let area = ball_region(3, p.eta_star(), num.tol).unwrap().area;
    let oracle_eta = common::pedrosa_eta_star(3);
    let oracle_v0 = common::pedrosa_region(3, oracle_eta).1;
    let ok = (p.v0() - 20.8576).abs() <= 0.01 && rel(area, 4.0 * PI * PI) <= 1e-6 && rel(p.v0(), oracle_v0) < 1e-6;
    r.record(4, ok, format!("v0 = {:.6} (oracle {oracle_v0:.6}), area at eta* / 4 pi^2 - 1 = {:.1e}", p.v0(), area / (4.0 * PI * PI) - 1.0));
}

fn criterion_5(r: &mut Report) {
    let s = SphereMetricSpec::new(5, 6.3).unwrap();
    let (v, a) = s.peak();
    let a = 3.0 * 7f64.sqrt() / 10.0 * a;
    // hemisphere of (S^5, 6.3 g0), bounded by an equatorial S^4
    let oracle_v = 6.3f64.powf(2.5) * common::sphere_volume(5) / 2.0;
    let oracle_a = 3.0 * 7f64.sqrt() / 10.0 * 6.3f64.powi(2) * common::sphere_volume(4);
    let ok = (a - 829.12).abs() <= 0.5 && (v - 1544.44).abs() <= 0.5 && rel(v, oracle_v) < 1e-9 && rel(a, oracle_a) < 1e-9;
    r.record(5, ok, format!("max {a:.4} at v = {v:.4}"));
}

fn expected_constant(name: &str) -> Option<(f64, Option<f64>)> {
    let s3 = 3f64.sqrt() / 2.0;
    let s7 = 3.0 * 7f64.sqrt();
    Some(match name {
        "lemma3.1" => (0.99, None),
        "lemma3.4" => (s3 / 0.99, Some(80.0)),
        "thm1.3" => (s3, None),
        "lemma4.2" => (s7 / 9.9, Some(427.0)),
        "thm1.2" => (s7 / 10.0, None),
        "lemma5.1-k7" => (0.94, None),
        "lemma5.1-k8" => (0.92, None),
        "lemma5.1-k9" => (0.86, None),
        _ => return None,
    })
}

fn criterion_6(r: &mut Report, num: &Numerics) {
    let mut ok = true;
    let mut worst = (f64::INFINITY, String::new());
    for name in PLAN_NAMES {
        let plan = builtin_plan(name, num).unwrap();
        if let Some((c, end)) = expected_constant(name) {
            ok &= rel(plan.c, c) < 1e-12;
            if let Some(end) = end {
                ok &= plan.range_end.is_some_and(|e| e >= end);
            }
        }
        let cert = certify_domination(&plan, num).unwrap();
        ok &= cert.passed() && cert.regimes.iter().all(|g| g.margin > 0.0);
        for g in &cert.regimes {
            if g.relative_margin < worst.0 {
                worst = (g.relative_margin, format!("{name} {}", g.method));
            }
        }
    }
    r.record(6, ok, format!("{} certificates; smallest relative margin {:.2e} ({})", PLAN_NAMES.len(), worst.0, worst.1));
}

fn criterion_7(r: &mut Report) {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for v in [16.0, 100.0, 1000.0] {
        let m = morgan_product_bound(MorganInstance::S3xR2.factors(), v).unwrap();
        let e = rel(m.bound, (2.0 * PI).powf(1.5) / 2f64.sqrt() * v.sqrt());
        worst = worst.max(e);
    }
    for v in [27.0, 200.0] {
        let m = morgan_product_bound(MorganInstance::S2xR3.factors(), v).unwrap();
        let e = rel(m.bound, 2f64.powf(5.0 / 6.0) * (3.0 * PI).powf(2.0 / 3.0) * v.powf(2.0 / 3.0));
        worst = worst.max(e);
    }
    ok &= worst <= 1e-6;
    let (t3, m3) = verify_auxiliary_min(MorganInstance::S3xR2).unwrap();
    let (t2, m2) = verify_auxiliary_min(MorganInstance::S2xR3).unwrap();
    ok &= (t3 - PI).abs() <= 1e-6 && (t2 - PI).abs() <= 1e-6;
    ok &= rel(m3, 2f64.sqrt() * PI.powf(1.5)) < 1e-9 && rel(m2, 2.0 * 2f64.cbrt() * (3.0 * PI).powf(2.0 / 3.0)) < 1e-9;
    r.record(7, ok, format!("worst relative deviation {worst:.1e}; minima at t - pi = {:.1e}, {:.1e}", t3 - PI, t2 - PI));
}

fn criterion_8(r: &mut Report, num: &Numerics) {
    let rows = reproduce_headlines_with(num).unwrap();
    let mut ok = rows.len() == 5;
    let mut detail = Vec::new();
    for row in &rows[..4] {
        // minimum of the curvature branch mu s / ((k+n)(k+n-1)) and lambda²
        let d = (row.k + row.n) as f64;
        let s = row.k as f64 * (row.k as f64 - 1.0);
        let oracle = (row.mu * s / (d * (d - 1.0))).min(row.lambda * row.lambda);
        let input = YamabeBoundInput::new(row.k, row.n, row.mu, row.lambda).unwrap();
        let direct = bound_theorem_1_1(&input).unwrap().ratio;
        ok &= rel(direct, oracle) < 1e-12 && rel(row.ratio, oracle) < 1e-12;
        // printed to three decimals
        ok &= (row.ratio - row.published).abs() < 1e-3;
        detail.push(format!("{} {:.6}", row.space, row.ratio));
    }
    let hp = &rows[4];
    let input = YamabeBoundInput::new(hp.k, hp.n, hp.mu, hp.lambda).unwrap().with_vol_ratio(256.0 / 343.0).unwrap();
    let direct = bound_theorem_1_7(&input).unwrap().ratio;
    ok &= direct > 0.59 && rel(direct, hp.ratio) < 1e-12;
    detail.push(format!("{} {:.6}", hp.space, direct));
    r.record(8, ok, detail.join("; "));
}

fn spot_check(plan: &DominationPlan, num: &Numerics, rng: &mut ChaCha8Rng) -> usize {
    let right = ProfileBound::sphere(&plan.right);
    let target = |v: f64| if v >= plan.right.total_volume() { 0.0 } else { plan.c * right.eval(v).unwrap() };
    let mut checked = 0;
    for step in &plan.steps {
        let (left, lo, hi) = match step {
            PlanStep::SmallVolume { left, until } => (left.clone(), 0.0, *until),
            PlanStep::GridChord { left, from, to, .. } => (left.clone(), *from, *to),
            PlanStep::Line { line, from, to } => (line.build(num).unwrap(), *from, *to),
            PlanStep::Tail { left, from } => (left.clone(), *from, 20.0 * from),
        };
        for _ in 0..100 {
            let v = lo + (hi - lo) * rng.gen_range(1e-6..1.0);
            let l = left.eval_with(v, num).unwrap();
            assert!(l >= target(v), "{}: {} < {} at v = {v}", plan.id, l, target(v));
            checked += 1;
        }
    }
    checked
}

fn criterion_9(r: &mut Report, num: &Numerics) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = true;

    for _ in 0..50 {
        let d = rng.gen_range(2..8);
        let mu = rng.gen_range(0.2..5.0);
        let spec = SphereMetricSpec::new(d, mu).unwrap();
        let unit = SphereMetricSpec::new(d, 1.0).unwrap();
        let v = spec.total_volume() * rng.gen_range(0.01..0.99);
        let scaled = mu.powf((d as f64 - 1.0) / 2.0) * unit.profile(v * mu.powf(-(d as f64) / 2.0)).unwrap();
        ok &= rel(spec.profile(v).unwrap(), scaled) < 1e-10;
        ok &= rel(spec.profile(v).unwrap(), spec.profile(spec.total_volume() - v).unwrap()) < 1e-9;
    }

    for k in [2i64, 3, 4, 7] {
        let p = CylinderProfile::shared_with(k, num.tol).unwrap();
        let e = k as f64 / (k as f64 + 1.0);
        let vs: Vec<f64> = (1..=60).map(|i| 2.0 * p.v0() * i as f64 / 60.0).collect();
        let is: Vec<f64> = vs.iter().map(|&v| p.profile_unit(v).unwrap()).collect();
        for i in 1..vs.len() {
            ok &= is[i] / vs[i].powf(e) <= is[i - 1] / vs[i - 1].powf(e) * (1.0 + 1e-9);
        }
        for i in 1..vs.len() - 1 {
            ok &= is[i] >= 0.5 * (is[i - 1] + is[i + 1]) - 1e-9 * is[i];
        }
    }

    let mut spots = 0;
    for name in PLAN_NAMES {
        spots += spot_check(&builtin_plan(name, num).unwrap(), num, &mut rng);
    }

    let tol = Tolerance::relative(1e-10);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let k = rng.gen_range(2..10);
        let eta = rng.gen_range(0.05..2.5);
        let a = ball_region(k, eta, tol).unwrap();
        let b = ball_region_crosscheck(k, eta, tol).unwrap();
        worst = worst.max(rel(a.area, b.area)).max(rel(a.volume, b.volume));
    }
    ok &= worst < 1e-7;
    r.record(9, ok, format!("scaling, symmetry, ratio and concavity samples hold; {spots} soundness spot checks; dual quadrature worst {worst:.1e}"));
}

fn main() {
    let num = Numerics::default();
    let mut r = Report { lines: Vec::new() };
    criterion_1(&mut r);
    criterion_2(&mut r);
    let (c3_rest, c3_k9) = criterion_3(&mut r, &num);
    criterion_4(&mut r, &num);
    criterion_5(&mut r);
    criterion_6(&mut r, &num);
    criterion_7(&mut r);
    criterion_8(&mut r, &num);
    criterion_9(&mut r, &num);

    let failed: Vec<u32> = r.lines.iter().filter(|l| !l.1 && l.0 != 3).map(|l| l.0).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
    assert!(c3_rest, "criterion 3 fails beyond the k = 9 table row");
    if !c3_k9 {
        // The printed k = 9 entry matches the exponent 8/9 rather than 9/10;
        // the row is reported as failing and the discrepancy pinned here.
        let p = CylinderProfile::shared_with(9, num.tol).unwrap();
        let i = p.profile_unit(0.0018).unwrap();
        assert!((i / 0.0018f64.powf(8.0 / 9.0) - 9.49).abs() < 0.01);
        assert!(i / 0.0018f64.powf(0.9) > 0.86 * gamma(10).unwrap());
    }
}
