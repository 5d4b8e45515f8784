#![allow(dead_code)]

use dirty_mac_core::ChannelParams;
use proptest::prelude::*;

/// Log-uniform power in `[1e-3, 1e6]`.
pub fn power() -> impl Strategy<Value = f64> {
    (-3.0f64..6.0).prop_map(|e| 10f64.powf(e))
}

/// Interference power, sometimes zero or infinite.
pub fn interference() -> impl Strategy<Value = f64> {
    prop_oneof![
        8 => power(),
        1 => Just(0.0),
        1 => Just(f64::INFINITY),
    ]
}

/// Conferencing capacity with the branch-switch atoms mixed in.
pub fn link() -> impl Strategy<Value = f64> {
    prop_oneof![
        6 => 0.0f64..8.0,
        1 => Just(0.0),
        1 => Just(0.5),
    ]
}

/// Normalized parameters with `No = 1`.
pub fn params() -> impl Strategy<Value = ChannelParams> {
    (power(), power(), interference(), interference(), link(), link()).prop_map(|(a, b, q1, q2, cb12, cb21)| {
        let (p1, p2) = if a >= b { (a, b) } else { (b, a) };
        ChannelParams::new(p1, p2, q1, q2, 1.0, cb12, cb21).unwrap()
    })
}

pub fn assert_same_vertices(got: &[(f64, f64)], want: &[(f64, f64)], tol: f64) {
    assert_eq!(got.len(), want.len(), "got {got:?}, want {want:?}");
    for (g, w) in got.iter().zip(want) {
        assert!((g.0 - w.0).abs() <= tol && (g.1 - w.1).abs() <= tol, "got {got:?}, want {want:?}");
    }
}
