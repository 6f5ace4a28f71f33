//! Browser bindings: profile curves and domination certificates as JSON
//! strings, so the page needs no glue beyond `JSON.parse`.

use isoprofile::bounds::Numerics;
use isoprofile::certify::certify_domination;
use isoprofile::cylinder::{CylinderProfile, CylinderSpec};
use isoprofile::geometry::SphereMetricSpec;
use isoprofile::plans::{builtin_plan, PLAN_NAMES};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Curve {
    label: String,
    volumes: Vec<f64>,
    areas: Vec<f64>,
    /// Volume where the profile changes character: the hemisphere for a
    /// sphere, the crossover to slabs for a cylinder.
    marker: f64,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Reply<T> {
    Ok { ok: T },
    Err { error: String },
}

fn reply<T: Serialize>(r: isoprofile::Result<T>) -> String {
    let r = match r {
        Ok(ok) => Reply::Ok { ok },
        Err(e) => Reply::Err { error: e.to_string() },
    };
    serde_json::to_string(&r).expect("plain data serializes")
}

fn interior(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let n = samples.clamp(2, 4000);
    (1..=n).map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64).collect()
}

pub fn sphere_curve(dim: i64, mu: f64, samples: usize) -> isoprofile::Result<impl Serialize> {
    let spec = SphereMetricSpec::new(dim, mu)?;
    let volumes = interior(0.0, spec.total_volume(), samples);
    let areas = volumes.iter().map(|&v| spec.profile(v)).collect::<isoprofile::Result<Vec<_>>>()?;
    Ok(Curve { label: format!("I(S^{dim}, {mu} g0)"), volumes, areas, marker: spec.total_volume() / 2.0 })
}

pub fn cylinder_curve(k: i64, mu: f64, max_volume: f64, samples: usize) -> isoprofile::Result<impl Serialize> {
    CylinderSpec::new(k, mu)?;
    let table = CylinderProfile::shared_with(k, Numerics::default().tol)?;
    let v0 = mu.powf((k as f64 + 1.0) / 2.0) * table.v0();
    let hi = if max_volume > 0.0 && max_volume.is_finite() { max_volume } else { 2.0 * v0 };
    let volumes = interior(0.0, hi, samples);
    let areas = volumes.iter().map(|&v| table.profile(mu, v)).collect::<isoprofile::Result<Vec<_>>>()?;
    Ok(Curve { label: format!("I(S^{k} x R, {mu}(g0 + dx^2))"), volumes, areas, marker: v0 })
}

/// Runs a built-in plan, optionally with a different constant `c`
/// (`c <= 0` keeps the plan's own).
pub fn certify_curve(plan: &str, c: f64) -> isoprofile::Result<impl Serialize> {
    let num = Numerics { grid_nodes: 256, ..Numerics::default() };
    let mut plan = builtin_plan(plan, &num)?;
    if c > 0.0 {
        plan = plan.with_c(c);
    }
    certify_domination(&plan, &num)
}

#[wasm_bindgen(js_name = sphereProfile)]
pub fn sphere_profile(dim: i32, mu: f64, samples: usize) -> String {
    reply(sphere_curve(dim.into(), mu, samples))
}

#[wasm_bindgen(js_name = cylinderProfile)]
pub fn cylinder_profile(k: i32, mu: f64, max_volume: f64, samples: usize) -> String {
    reply(cylinder_curve(k.into(), mu, max_volume, samples))
}

#[wasm_bindgen(js_name = certifyPlan)]
pub fn certify_plan(plan: &str, c: f64) -> String {
    reply(certify_curve(plan, c))
}

#[wasm_bindgen(js_name = planNames)]
pub fn plan_names() -> String {
    serde_json::to_string(&PLAN_NAMES).expect("strings serialize")
}
