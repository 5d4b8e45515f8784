use dirty_mac_core::sim::{run_claim1, NoiseFamily};
use dirty_mac_core::{run_layer_c, run_layer_l, run_layer_r, select_cooperation_power, ChannelParams, SimReport};

const N: usize = 200_000;

fn assert_passed(r: &SimReport) {
    let failed: Vec<_> = r.checks().into_iter().filter(|c| !c.pass).collect();
    assert!(failed.is_empty(), "{:?} failed {failed:?}", r.layer);
}

fn point() -> ChannelParams {
    ChannelParams::new(10.0, 1.0, 10.0, 10.0, 1.0, 0.0, 1.0).unwrap()
}

#[test]
fn all_layers_meet_their_checks() {
    let p = point();
    let s = select_cooperation_power(&p).unwrap();
    for r in [run_layer_l(&p, N, 3).unwrap(), run_layer_c(&p, &s, N, 3).unwrap(), run_layer_r(&p, &s, N, 3).unwrap()] {
        assert!(!r.empty);
        assert_passed(&r);
    }
}

#[test]
fn strong_interference_does_not_change_layer_l() {
    let p = ChannelParams::new(50.0, 4.0, 1e4, 1e4, 1.0, 0.0, 2.0).unwrap();
    let r = run_layer_l(&p, N, 11).unwrap();
    assert_passed(&r);
    assert!(r.ks_interference_invariance.unwrap() < 0.01);
}

#[test]
fn reports_are_reproducible() {
    let p = point();
    let s = select_cooperation_power(&p).unwrap();
    assert_eq!(run_layer_c(&p, &s, 10_000, 5).unwrap(), run_layer_c(&p, &s, 10_000, 5).unwrap());
    assert_ne!(run_layer_c(&p, &s, 10_000, 5).unwrap(), run_layer_c(&p, &s, 10_000, 6).unwrap());
}

#[test]
fn gaussian_noise_is_the_worst_case() {
    let r = run_claim1(1.0, 4.0, 1.0, NoiseFamily::Uniform, N, 9).unwrap();
    assert_passed(&r);
    let json = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<SimReport>(&json).unwrap(), r);
}
