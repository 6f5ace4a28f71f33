use isoprofile_wasm::{certify_plan, cylinder_profile, plan_names, sphere_profile};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn sphere_curve_is_symmetric() {
    let v = parse(&sphere_profile(3, 1.0, 99));
    let areas = v["ok"]["areas"].as_array().unwrap();
    assert_eq!(areas.len(), 99);
    let a = |i: usize| areas[i].as_f64().unwrap();
    assert!((a(10) - a(88)).abs() < 1e-9);
    assert!((a(49) - 4.0 * std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn cylinder_marker_is_crossover() {
    let v = parse(&cylinder_profile(3, 1.0, 0.0, 50));
    assert!((v["ok"]["marker"].as_f64().unwrap() - 20.8576).abs() < 1e-3);
    let last = v["ok"]["areas"].as_array().unwrap().last().unwrap().as_f64().unwrap();
    assert!((last - 4.0 * std::f64::consts::PI.powi(2)).abs() < 1e-9);
}

#[test]
fn certify_pass_and_fail() {
    let v = parse(&certify_plan("thm1.3", 0.0));
    assert_eq!(v["ok"]["status"], "pass");
    let v = parse(&certify_plan("thm1.3", 0.99));
    assert_eq!(v["ok"]["status"], "fail");
}

#[test]
fn errors_are_reported() {
    assert!(parse(&sphere_profile(0, 1.0, 10))["error"].is_string());
    assert!(parse(&certify_plan("nope", 0.0))["error"].is_string());
    assert_eq!(parse(&plan_names()).as_array().unwrap().len(), 10);
}
