mod common;

use std::f64::consts::PI;

use isoprofile::bounds::{morgan_product_bound, MorganInstance, ProfileBound, VolumeRange};
use isoprofile::cylinder::{ball_region, ball_region_crosscheck, CylinderProfile};
use isoprofile::geometry::SphereMetricSpec;
use isoprofile::quad::Tolerance;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sphere_scaling_identity(d in 2i64..10, mu in 0.1f64..10.0, frac in 0.001f64..0.999) {
        let spec = SphereMetricSpec::new(d, mu).unwrap();
        let unit = SphereMetricSpec::new(d, 1.0).unwrap();
        let v = frac * spec.total_volume();
        let df = d as f64;
        let scaled = mu.powf((df - 1.0) / 2.0) * unit.profile(v / mu.powf(df / 2.0)).unwrap();
        prop_assert!(rel(spec.profile(v).unwrap(), scaled) < 1e-10);
    }

    #[test]
    fn sphere_profile_symmetric(d in 2i64..10, mu in 0.1f64..10.0, frac in 0.001f64..0.5) {
        let spec = SphereMetricSpec::new(d, mu).unwrap();
        let v = frac * spec.total_volume();
        let a = spec.profile(v).unwrap();
        let b = spec.profile(spec.total_volume() - v).unwrap();
        prop_assert!(rel(a, b) < 1e-9);
    }

    #[test]
    fn sphere_matches_oracle(d in 2u32..9, mu in 0.2f64..5.0, frac in 0.01f64..0.99) {
        let spec = SphereMetricSpec::new(d.into(), mu).unwrap();
        let v = frac * spec.total_volume();
        prop_assert!(rel(spec.profile(v).unwrap(), common::sphere_profile(d, mu, v)) < 1e-9);
    }

    #[test]
    fn cylinder_scaling_law(k in 2i64..6, mu in 0.2f64..5.0, v in 0.01f64..60.0) {
        let p = CylinderProfile::shared(k).unwrap();
        let kf = k as f64;
        let expect = mu.powf(kf / 2.0) * p.profile_unit(v / mu.powf((kf + 1.0) / 2.0)).unwrap();
        // both sides invert the volume separately, each to the quadrature tolerance
        prop_assert!(rel(p.profile(mu, v).unwrap(), expect) < 1e-9);
    }

    #[test]
    fn sampled_profile_ratio_and_concavity(k in 2i64..10, lo in 0.001f64..0.5, spread in 1.5f64..40.0) {
        let p = CylinderProfile::shared(k).unwrap();
        let e = k as f64 / (k as f64 + 1.0);
        let hi = lo * spread * p.v0().max(1.0);
        let vs: Vec<f64> = (0..40).map(|i| lo + (hi - lo) * i as f64 / 39.0).collect();
        let is: Vec<f64> = vs.iter().map(|&v| p.profile_unit(v).unwrap()).collect();
        for i in 1..vs.len() {
            prop_assert!(is[i] / vs[i].powf(e) <= is[i - 1] / vs[i - 1].powf(e) * (1.0 + 1e-9));
            prop_assert!(is[i] >= is[i - 1] * (1.0 - 1e-12));
        }
        for i in 1..vs.len() - 1 {
            prop_assert!(is[i] >= 0.5 * (is[i - 1] + is[i + 1]) - 1e-9 * is[i]);
        }
    }

    #[test]
    fn morgan_bound_is_an_infimum(v in 1.0f64..3000.0, t in 0.01f64..PI, s3 in any::<bool>()) {
        let instance = if s3 { MorganInstance::S3xR2 } else { MorganInstance::S2xR3 };
        let factors = instance.factors();
        let m = morgan_product_bound(factors, v).unwrap();
        prop_assert!(m.infimum <= factors.objective(v, t) * (1.0 + 1e-12));
        prop_assert!(rel(m.bound, m.infimum / 2f64.sqrt()) < 1e-12);
    }

    #[test]
    fn power_law_matches_morgan_past_threshold(scale in 1.0f64..50.0, s3 in any::<bool>()) {
        let instance = if s3 { MorganInstance::S3xR2 } else { MorganInstance::S2xR3 };
        let v = instance.threshold() * scale;
        let (c, e) = instance.power_law();
        let law = ProfileBound::power_law(c, e, VolumeRange::from(instance.threshold()));
        let m = morgan_product_bound(instance.factors(), v).unwrap();
        prop_assert!(rel(law.eval(v).unwrap(), m.bound) < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn dual_quadrature_agrees(k in 2i64..10, eta in 0.01f64..2.9) {
        let tol = Tolerance::relative(1e-10);
        let a = ball_region(k, eta, tol).unwrap();
        let b = ball_region_crosscheck(k, eta, tol).unwrap();
        prop_assert!(rel(a.area, b.area) < 1e-7, "area {} vs {}", a.area, b.area);
        prop_assert!(rel(a.volume, b.volume) < 1e-7, "volume {} vs {}", a.volume, b.volume);
    }
}
