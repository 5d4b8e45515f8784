mod common;

use dirty_mac_core::fme::project_to_region;
use dirty_mac_core::{
    build_layer_system_coop, build_layer_system_no_coop, fme_eliminate, inner_coop, inner_no_coop,
    select_cooperation_power, LinearSystem, RATE_TOL,
};
use proptest::prelude::*;

/// Feasible interval of `z >= 0` for fixed `(x, y)`, empty when `lo > hi`.
fn z_interval(rows: &[(f64, f64, f64, f64)], x: f64, y: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for &(a, b, c, r) in rows {
        let slack = r - a * x - b * y;
        if c > 0.0 {
            hi = hi.min(slack / c);
        } else if c < 0.0 {
            lo = lo.max(slack / c);
        } else if slack < 0.0 {
            return (1.0, 0.0);
        }
    }
    (lo, hi)
}

fn small_system() -> impl Strategy<Value = Vec<(f64, f64, f64, f64)>> {
    let coef = (-2i32..=2).prop_map(f64::from);
    prop::collection::vec((coef.clone(), coef.clone(), coef, 0.0f64..3.0), 1..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn elimination_is_sound_and_complete(rows in small_system()) {
        let mut sys = LinearSystem::new(&["x", "y", "z"]);
        for &(a, b, c, r) in &rows {
            sys.add_le(&[("x", a), ("y", b), ("z", c)], r).unwrap();
        }
        let proj = fme_eliminate(&sys, &["x", "y"]).unwrap();
        for i in 0..=12 {
            for j in 0..=12 {
                let (x, y) = (0.25 * i as f64, 0.25 * j as f64);
                let (lo, hi) = z_interval(&rows, x, y);
                let feasible = lo <= hi + 1e-9;
                let projected = proj.is_satisfied_by(&[x, y], 1e-9);
                prop_assert_eq!(feasible, projected, "point ({}, {}), z in [{}, {}]", x, y, lo, hi);
            }
        }
    }

    #[test]
    fn layer_projection_matches_closed_form(p in common::params()) {
        let nc = project_to_region(&build_layer_system_no_coop(&p)).unwrap();
        common::assert_same_vertices(&nc.vertices().unwrap(), &inner_no_coop(&p).vertices().unwrap(), RATE_TOL);

        let s = select_cooperation_power(&p).unwrap();
        let c = project_to_region(&build_layer_system_coop(&p, &s)).unwrap();
        common::assert_same_vertices(&c.vertices().unwrap(), &inner_coop(&p, &s).vertices().unwrap(), RATE_TOL);
    }
}
