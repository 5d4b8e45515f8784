//! Constant-gap verification between the outer and inner bounds.
//!
//! A pair `(g1, g2)` is verified by shrinking every outer vertex by `g1` in
//! `R1` and `g2` in `R2` (clamped at zero) and testing that the result lies
//! in the inner region. Per-constraint gaps are compared against the
//! case-wise analytic constants as an independent check.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{select_cooperation_power, theta_c_candidates, ChannelParams, SchemeParams};
use crate::regions::{self, RateRegion, RATE_TOL};

/// Gap constants without cooperation.
pub const NO_COOP_GAP: (f64, f64) = (1.0, 0.5);
/// Gap constants with cooperation.
pub const COOP_GAP: (f64, f64) = (3.0, 1.5);

/// Which branch of the cooperation-power selection is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AppendixCase {
    CbSmall,
    ThetaCapacityLimited,
    ThetaQ2Limited,
    ThetaPowerLimited,
}

impl AppendixCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            AppendixCase::CbSmall => "CB_SMALL",
            AppendixCase::ThetaCapacityLimited => "THETA_CAPACITY_LIMITED",
            AppendixCase::ThetaQ2Limited => "THETA_Q2_LIMITED",
            AppendixCase::ThetaPowerLimited => "THETA_POWER_LIMITED",
        }
    }
}

impl fmt::Display for AppendixCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AppendixCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "CB_SMALL" => Ok(AppendixCase::CbSmall),
            "THETA_CAPACITY_LIMITED" => Ok(AppendixCase::ThetaCapacityLimited),
            "THETA_Q2_LIMITED" => Ok(AppendixCase::ThetaQ2Limited),
            "THETA_POWER_LIMITED" => Ok(AppendixCase::ThetaPowerLimited),
            other => Err(Error::UnknownCase(other.to_string())),
        }
    }
}

/// The comparison whose analytic constants are requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    NoCooperation,
    Cooperation(AppendixCase),
}

pub fn classify_case(p: &ChannelParams, s: &SchemeParams) -> AppendixCase {
    if p.cb21 < 0.5 {
        return AppendixCase::CbSmall;
    }
    let [capacity, q2, power] = theta_c_candidates(p);
    if s.theta_c == capacity.max(0.0) {
        AppendixCase::ThetaCapacityLimited
    } else if s.theta_c == q2 {
        AppendixCase::ThetaQ2Limited
    } else {
        debug_assert!(s.theta_c == power.max(0.0));
        AppendixCase::ThetaPowerLimited
    }
}

/// `(sum_gap_bound, r2_gap_bound)` in bits.
pub fn analytic_gap_bounds(mode: BoundMode) -> (f64, f64) {
    match mode {
        BoundMode::NoCooperation => NO_COOP_GAP,
        BoundMode::Cooperation(AppendixCase::CbSmall) => (2.0, 0.5),
        BoundMode::Cooperation(AppendixCase::ThetaCapacityLimited | AppendixCase::ThetaQ2Limited) => {
            (3.0, 1.5)
        }
        BoundMode::Cooperation(AppendixCase::ThetaPowerLimited) => (1.5, 1.5),
    }
}

/// Parses a case name, including `NO_COOP`, and returns its constants.
pub fn analytic_gap_bounds_named(name: &str) -> Result<(f64, f64)> {
    if name == "NO_COOP" {
        return Ok(analytic_gap_bounds(BoundMode::NoCooperation));
    }
    Ok(analytic_gap_bounds(BoundMode::Cooperation(name.parse()?)))
}

/// Shrink-containment test. Returns the pass flag and the largest violation.
pub fn shrink_check(outer: &RateRegion, inner: &RateRegion, g1: f64, g2: f64, tol: f64) -> Result<(bool, f64)> {
    let mut worst = 0.0f64;
    for (v1, v2) in outer.vertices()? {
        let pt = ((v1 - g1).max(0.0), (v2 - g2).max(0.0));
        worst = worst.max(inner.max_violation(pt));
    }
    Ok((worst <= tol, worst))
}

/// Outcome of one inner/outer comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCheck {
    pub g1_required: f64,
    pub g2_required: f64,
    pub shrink_pass: bool,
    pub worst_violation: f64,
    /// Tightest outer sum bound minus inner sum bound.
    pub sum_gap: f64,
    /// Outer `R2` bound minus inner `R2` bound.
    pub r2_gap: f64,
    pub sum_gap_bound: f64,
    pub r2_gap_bound: f64,
    pub pass: bool,
}

fn compare(outer: &RateRegion, inner: &RateRegion, required: (f64, f64), analytic: (f64, f64)) -> Result<GapCheck> {
    let (shrink_pass, worst_violation) = shrink_check(outer, inner, required.0, required.1, RATE_TOL)?;
    let sum_gap = outer.sum_rhs() - inner.sum_rhs();
    let r2_gap = outer.r2_rhs() - inner.r2_rhs();
    let within = sum_gap <= analytic.0 + RATE_TOL && r2_gap <= analytic.1 + RATE_TOL;
    Ok(GapCheck {
        g1_required: required.0,
        g2_required: required.1,
        shrink_pass,
        worst_violation,
        sum_gap,
        r2_gap,
        sum_gap_bound: analytic.0,
        r2_gap_bound: analytic.1,
        pass: shrink_pass && within,
    })
}

/// Right-hand sides of all four regions, in constructor order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundValues {
    #[serde(with = "crate::serde_ext::vec")]
    pub outer_no_coop: Vec<f64>,
    #[serde(with = "crate::serde_ext::vec")]
    pub inner_no_coop: Vec<f64>,
    #[serde(with = "crate::serde_ext::vec")]
    pub outer_coop: Vec<f64>,
    #[serde(with = "crate::serde_ext::vec")]
    pub inner_coop: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub params: ChannelParams,
    pub scheme: SchemeParams,
    pub appendix_case: AppendixCase,
    pub no_coop: GapCheck,
    pub coop: GapCheck,
    pub bounds: BoundValues,
    /// Worst shrink violation over both comparisons.
    pub worst_violation: f64,
    pub analytic_sum_gap_bound: f64,
    pub analytic_r2_gap_bound: f64,
    pub pass: bool,
}

fn rhs(r: &RateRegion) -> Vec<f64> {
    r.constraints.iter().map(|h| h.c).collect()
}

/// Checks both constant-gap statements at one parameter point.
pub fn verify_theorems(p: &ChannelParams) -> Result<GapReport> {
    let scheme = select_cooperation_power(p)?;
    let case = classify_case(p, &scheme);

    let outer_nc = regions::outer_no_coop(p);
    let inner_nc = regions::inner_no_coop(p);
    let outer_c = regions::outer_coop(p);
    let inner_c = regions::inner_coop(p, &scheme);

    let no_coop = compare(&outer_nc, &inner_nc, NO_COOP_GAP, analytic_gap_bounds(BoundMode::NoCooperation))?;
    let analytic = analytic_gap_bounds(BoundMode::Cooperation(case));
    let coop = compare(&outer_c, &inner_c, COOP_GAP, analytic)?;

    Ok(GapReport {
        params: *p,
        scheme,
        appendix_case: case,
        worst_violation: no_coop.worst_violation.max(coop.worst_violation),
        pass: no_coop.pass && coop.pass,
        bounds: BoundValues {
            outer_no_coop: rhs(&outer_nc),
            inner_no_coop: rhs(&inner_nc),
            outer_coop: rhs(&outer_c),
            inner_coop: rhs(&inner_c),
        },
        no_coop,
        coop,
        analytic_sum_gap_bound: analytic.0,
        analytic_r2_gap_bound: analytic.1,
    })
}
