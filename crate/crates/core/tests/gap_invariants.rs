mod common;

use dirty_mac_core::{
    analytic_gap_bounds, cfun, classify_case, inner_no_coop, outer_no_coop, select_cooperation_power, verify_theorems,
    BoundMode, ChannelParams, RATE_TOL,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn r2_cap_gap_is_at_most_half_a_bit(p in common::params()) {
        let gap = outer_no_coop(&p).r2_rhs() - inner_no_coop(&p).r2_rhs();
        prop_assert!(gap <= 0.5 + RATE_TOL, "gap {}", gap);
    }

    #[test]
    fn sum_gap_is_at_most_one_bit(p in common::params()) {
        let inner = inner_no_coop(&p).sum_rhs();
        let (snr1, snr2, inr2) = (p.snr1(), p.snr2(), p.inr2());
        // the first outer sum bound binds against weak interference, the second against strong
        let outer = if inr2 <= 1.0 + 2.0 * snr2 {
            cfun(snr1 + snr2).unwrap()
        } else {
            outer_no_coop(&p).sum_rhs()
        };
        prop_assert!(outer - inner <= 1.0 + RATE_TOL, "gap {}", outer - inner);
    }

    #[test]
    fn every_point_meets_its_gap(p in common::params()) {
        let r = verify_theorems(&p).unwrap();
        prop_assert!(r.no_coop.pass, "{:?}", r);
        prop_assert!(r.coop.pass, "{:?}", r);
        let s = select_cooperation_power(&p).unwrap();
        let (g1, g2) = analytic_gap_bounds(BoundMode::Cooperation(classify_case(&p, &s)));
        prop_assert!(r.coop.sum_gap <= g1 + RATE_TOL && r.coop.r2_gap <= g2 + RATE_TOL);
    }

    #[test]
    fn relabelled_input_gives_same_report(p in common::params()) {
        prop_assume!(p.p1 > p.p2);
        let raw = ChannelParams { p1: p.p2, p2: p.p1, q1: p.q2, q2: p.q1, cb12: p.cb21, cb21: p.cb12, ..p };
        let a = verify_theorems(&p).unwrap();
        let b = verify_theorems(&raw.normalize().unwrap()).unwrap();
        prop_assert_eq!(a.bounds, b.bounds);
        prop_assert_eq!(a.pass, b.pass);
    }
}
