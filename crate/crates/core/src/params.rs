//! Channel parameters and the derived quantities of the layered scheme.
//!
//! All powers and variances are linear-scale. Interference variances may be
//! `f64::INFINITY`; every formula downstream treats `x / inf` as `0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_ext;

/// Two-user doubly-dirty MAC with conferencing links.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub p1: f64,
    pub p2: f64,
    #[serde(with = "serde_ext")]
    pub q1: f64,
    #[serde(with = "serde_ext")]
    pub q2: f64,
    pub no: f64,
    /// Conferencing capacity Tx1 -> Tx2. Accepted, never consumed.
    pub cb12: f64,
    /// Conferencing capacity Tx2 -> Tx1.
    pub cb21: f64,
    /// Users were relabelled so that `p1 >= p2`.
    #[serde(default)]
    pub swapped: bool,
}

fn check_nonneg_finite(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::invalid(name, format!("must be finite, got {v}")));
    }
    if v < 0.0 {
        return Err(Error::invalid(name, format!("must be >= 0, got {v}")));
    }
    Ok(())
}

fn check_nonneg(name: &'static str, v: f64) -> Result<()> {
    if v.is_nan() || v < 0.0 {
        return Err(Error::invalid(name, format!("must be >= 0, got {v}")));
    }
    Ok(())
}

impl ChannelParams {
    /// Builds validated, unnormalized parameters.
    pub fn new(p1: f64, p2: f64, q1: f64, q2: f64, no: f64, cb12: f64, cb21: f64) -> Result<Self> {
        let p = ChannelParams {
            p1,
            p2,
            q1,
            q2,
            no,
            cb12,
            cb21,
            swapped: false,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.no.is_finite() || self.no <= 0.0 {
            return Err(Error::invalid("no", format!("noise variance must be finite and > 0, got {}", self.no)));
        }
        check_nonneg_finite("p1", self.p1)?;
        check_nonneg_finite("p2", self.p2)?;
        check_nonneg("q1", self.q1)?;
        check_nonneg("q2", self.q2)?;
        check_nonneg_finite("cb12", self.cb12)?;
        check_nonneg_finite("cb21", self.cb21)?;
        Ok(())
    }

    /// Relabels users so that user 1 is the stronger one. Ties keep the order.
    pub fn normalize(self) -> Result<Self> {
        self.validate()?;
        if self.p1 < self.p2 {
            Ok(ChannelParams {
                p1: self.p2,
                p2: self.p1,
                q1: self.q2,
                q2: self.q1,
                no: self.no,
                cb12: self.cb21,
                cb21: self.cb12,
                swapped: !self.swapped,
            })
        } else {
            Ok(self)
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.p1 >= self.p2
    }

    pub fn snr1(&self) -> f64 {
        self.p1 / self.no
    }

    pub fn snr2(&self) -> f64 {
        self.p2 / self.no
    }

    pub fn inr1(&self) -> f64 {
        self.q1 / self.no
    }

    pub fn inr2(&self) -> f64 {
        self.q2 / self.no
    }
}

/// Power split and receiver coefficients of the three-layer scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub theta_l: f64,
    pub theta_c: f64,
    pub theta_r: f64,
    pub alpha_l: f64,
    pub alpha_c: f64,
    pub delta: f64,
    pub r21: f64,
}

impl SchemeParams {
    fn from_theta_c(p: &ChannelParams, theta_c: f64, r21: f64) -> Self {
        let theta_l = p.p2;
        let floor = p.no + 2.0 * p.p2;
        let (alpha_c, delta) = if theta_c > 0.0 {
            (theta_c / (theta_c + floor), theta_c * floor / (theta_c + floor))
        } else {
            (0.0, 0.0)
        };
        SchemeParams {
            theta_l,
            theta_c,
            // P1 - P2 - thetaC can round to a tiny negative when thetaC = P1 - P2.
            theta_r: (p.p1 - theta_c - p.p2).max(0.0),
            alpha_l: 2.0 * theta_l / (2.0 * theta_l + p.no),
            alpha_c,
            delta,
            r21,
        }
    }

    /// Scheme without the cooperation layer: thetaC = r21 = 0.
    pub fn no_cooperation(p: &ChannelParams) -> Self {
        Self::from_theta_c(p, 0.0, 0.0)
    }

    /// Noise floor seen by layer C: `No + 2 P2`.
    pub fn layer_c_floor(p: &ChannelParams) -> f64 {
        p.no + 2.0 * p.p2
    }
}

/// The three candidates of the thetaC minimum, in tie-break order.
pub(crate) fn theta_c_candidates(p: &ChannelParams) -> [f64; 3] {
    let floor = SchemeParams::layer_c_floor(p);
    [
        floor * (2f64.powf(2.0 * p.cb21) - 2.0).max(0.0),
        p.q2,
        p.p1 - p.p2,
    ]
}

/// Chooses the cooperation-layer power and compression rate.
///
/// With `cb21 >= 1/2` the layer gets the smallest of the rate-, interference-
/// and power-limited budgets and spends `(1/2) log2(2 + thetaC/(No+2P2))` of
/// the link on the compression index. Below `1/2` the layer is dropped.
pub fn select_cooperation_power(p: &ChannelParams) -> Result<SchemeParams> {
    p.validate()?;
    if !p.is_normalized() {
        return Err(Error::invalid("p1", "parameters must be normalized (p1 >= p2)"));
    }
    if p.cb21 < 0.5 {
        return Ok(SchemeParams::no_cooperation(p));
    }
    let theta_c = theta_c_candidates(p)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
        .max(0.0);
    let r21 = 0.5 * (2.0 + theta_c / SchemeParams::layer_c_floor(p)).log2();
    Ok(SchemeParams::from_theta_c(p, theta_c, r21))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(p1: f64, p2: f64, q2: f64, cb21: f64) -> ChannelParams {
        ChannelParams::new(p1, p2, 7.0, q2, 1.0, 0.0, cb21).unwrap()
    }

    #[test]
    fn normalize_swaps_weaker_first_user() {
        let raw = ChannelParams::new(1.0, 2.0, 3.0, 4.0, 1.0, 0.25, 0.75).unwrap();
        let n = raw.normalize().unwrap();
        assert_eq!((n.p1, n.p2, n.q1, n.q2), (2.0, 1.0, 4.0, 3.0));
        assert_eq!((n.cb12, n.cb21), (0.75, 0.25));
        assert!(n.swapped);
    }

    #[test]
    fn normalize_keeps_ordered_and_tied_params() {
        let raw = ChannelParams::new(2.0, 1.0, 3.0, 4.0, 1.0, 0.25, 0.75).unwrap();
        assert_eq!(raw.normalize().unwrap(), raw);
        let tie = ChannelParams::new(1.0, 1.0, 3.0, 4.0, 1.0, 0.25, 0.75).unwrap();
        let n = tie.normalize().unwrap();
        assert_eq!(n, tie);
        assert!(!n.swapped);
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 1.0, f64::INFINITY, 0.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 1.0, f64::NAN, 0.0, 0.0).is_err());
        assert!(ChannelParams::new(-1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, -1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 1.0, 1.0, -0.1, 0.0).is_err());
        assert!(ChannelParams::new(f64::INFINITY, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        // infinite interference is allowed
        assert!(ChannelParams::new(1.0, 1.0, f64::INFINITY, f64::INFINITY, 1.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn capacity_limited_cooperation_power() {
        let s = select_cooperation_power(&params(10.0, 1.0, 100.0, 1.0)).unwrap();
        assert_relative_eq!(s.theta_c, 6.0, epsilon = 1e-12);
        assert_relative_eq!(s.r21, 1.0, epsilon = 1e-12);
        assert_relative_eq!(s.theta_r, 3.0, epsilon = 1e-12);
        assert_eq!(s.theta_l, 1.0);
        assert_relative_eq!(s.alpha_l, 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(s.alpha_c, 6.0 / 9.0, epsilon = 1e-15);
        assert_relative_eq!(s.delta, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn small_link_drops_cooperation_layer() {
        let s = select_cooperation_power(&params(10.0, 1.0, 100.0, 0.4)).unwrap();
        assert_eq!(s.theta_c, 0.0);
        assert_eq!(s.r21, 0.0);
        assert_eq!(s.theta_r, 9.0);
    }

    #[test]
    fn power_limited_cooperation_power() {
        let s = select_cooperation_power(&params(3.0, 1.0, 100.0, 2.0)).unwrap();
        assert_eq!(s.theta_c, 2.0);
        assert_eq!(s.theta_r, 0.0);
    }

    #[test]
    fn infinite_interference_does_not_limit_theta_c() {
        let p = ChannelParams::new(10.0, 1.0, f64::INFINITY, f64::INFINITY, 1.0, 0.0, 1.0).unwrap();
        let s = select_cooperation_power(&p).unwrap();
        assert_relative_eq!(s.theta_c, 6.0, epsilon = 1e-12);
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let p = ChannelParams::new(1.0, 2.0, 1.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(select_cooperation_power(&p).is_err());
    }

    fn arb_params() -> impl Strategy<Value = ChannelParams> {
        (
            -3.0f64..6.0,
            -3.0f64..6.0,
            -3.0f64..6.0,
            -1.0f64..1.0,
            0.0f64..8.0,
        )
            .prop_map(|(a, b, q, n, cb)| {
                ChannelParams::new(10f64.powf(a), 10f64.powf(b), 1.0, 10f64.powf(q), 10f64.powf(n), 0.0, cb)
                    .unwrap()
                    .normalize()
                    .unwrap()
            })
    }

    proptest! {
        #[test]
        fn scheme_invariants_hold(p in arb_params()) {
            let s = select_cooperation_power(&p).unwrap();
            prop_assert!(s.theta_c >= 0.0);
            prop_assert!(s.theta_c <= p.q2.min(p.p1 - p.p2) + 1e-12 * p.p1);
            prop_assert!(s.theta_r >= 0.0);
            prop_assert_eq!(s.theta_l, p.p2);
            prop_assert!((0.0..1.0).contains(&s.alpha_l));
            prop_assert!((0.0..1.0).contains(&s.alpha_c));
            prop_assert!(s.r21 >= 0.0);
            prop_assert!(s.r21 <= p.cb21 + 1e-12);
        }

        #[test]
        fn theta_c_monotone_in_link_capacity(p in arb_params(), extra in 0.0f64..4.0) {
            let lo = select_cooperation_power(&p).unwrap();
            let hi = select_cooperation_power(&ChannelParams { cb21: p.cb21 + extra, ..p }).unwrap();
            prop_assert!(hi.theta_c >= lo.theta_c);
        }
    }
}
