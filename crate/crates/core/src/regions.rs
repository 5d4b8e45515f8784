//! Two-dimensional rate regions as intersections of half-planes.
//!
//! Every region lives in the nonnegative quadrant; the constraints `R1 >= 0`
//! and `R2 >= 0` are implicit and never stored.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ChannelParams, SchemeParams};
use crate::serde_ext;

/// Absolute tolerance on rates, in bits.
pub const RATE_TOL: f64 = 1e-9;

/// `C(x) = (1/2) log2(1 + x)`.
pub fn cfun(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("C(x) requires x >= 0, got {x}")));
    }
    Ok(c_unchecked(x))
}

pub(crate) fn c_unchecked(x: f64) -> f64 {
    0.5 * x.ln_1p() / std::f64::consts::LN_2
}

/// `(1/2) log2+(x) = max(0, (1/2) log2 x)`.
pub(crate) fn half_log2_plus(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        0.5 * x.log2()
    }
}

pub(crate) fn positive_part(x: f64) -> f64 {
    x.max(0.0)
}

/// `a * R1 + b * R2 <= c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    #[serde(with = "serde_ext")]
    pub c: f64,
}

impl HalfPlane {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if a == 0.0 && b == 0.0 {
            return Err(Error::Domain("half-plane needs a nonzero normal".into()));
        }
        if !a.is_finite() || !b.is_finite() || c.is_nan() {
            return Err(Error::Domain(format!("bad half-plane ({a}, {b}, {c})")));
        }
        Ok(HalfPlane { a, b, c })
    }

    pub fn sum(c: f64) -> Self {
        HalfPlane { a: 1.0, b: 1.0, c }
    }

    pub fn r2(c: f64) -> Self {
        HalfPlane { a: 0.0, b: 1.0, c }
    }

    pub fn r1(c: f64) -> Self {
        HalfPlane { a: 1.0, b: 0.0, c }
    }

    fn slack(&self, pt: (f64, f64)) -> f64 {
        if self.c == f64::INFINITY {
            return f64::INFINITY;
        }
        self.c - (self.a * pt.0 + self.b * pt.1)
    }

    /// Amount by which `pt` violates this constraint (0 when satisfied).
    pub fn violation(&self, pt: (f64, f64)) -> f64 {
        (-self.slack(pt)).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RateRegion {
    pub constraints: Vec<HalfPlane>,
}

/// JSON form: constraints plus the derived vertex list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionDoc {
    pub constraints: Vec<HalfPlane>,
    pub vertices: Vec<[f64; 2]>,
}

impl RateRegion {
    pub fn new(constraints: Vec<HalfPlane>) -> Self {
        RateRegion { constraints }
    }

    /// Tightest sum-rate bound, `+inf` if none.
    pub fn sum_rhs(&self) -> f64 {
        self.rhs_for(1.0, 1.0)
    }

    /// Tightest individual `R2` bound, `+inf` if none.
    pub fn r2_rhs(&self) -> f64 {
        self.rhs_for(0.0, 1.0)
    }

    fn rhs_for(&self, a: f64, b: f64) -> f64 {
        self.constraints
            .iter()
            .filter(|h| h.a == a && h.b == b)
            .map(|h| h.c)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, pt: (f64, f64), tol: f64) -> bool {
        pt.0 >= -tol && pt.1 >= -tol && self.constraints.iter().all(|h| h.slack(pt) >= -tol)
    }

    /// Largest violation of any constraint (including the axes) at `pt`.
    pub fn max_violation(&self, pt: (f64, f64)) -> f64 {
        self.constraints
            .iter()
            .map(|h| h.violation(pt))
            .fold((-pt.0).max(-pt.1).max(0.0), f64::max)
    }

    fn is_bounded(&self) -> bool {
        let finite: Vec<&HalfPlane> = self.constraints.iter().filter(|h| h.c.is_finite()).collect();
        let recedes = |d: (f64, f64)| finite.iter().all(|h| h.a * d.0 + h.b * d.1 <= 1e-12);
        let mut dirs = vec![(1.0, 0.0), (0.0, 1.0)];
        for h in &finite {
            if h.a * h.b < 0.0 {
                dirs.push((h.b.abs(), h.a.abs()));
            }
        }
        !dirs.into_iter().any(recedes)
    }

    /// Extreme points, counterclockwise from the lexicographically smallest.
    pub fn vertices(&self) -> Result<Vec<(f64, f64)>> {
        if !self.is_bounded() {
            return Err(Error::UnboundedRegion);
        }
        let mut lines: Vec<HalfPlane> = self.constraints.iter().copied().filter(|h| h.c.is_finite()).collect();
        lines.push(HalfPlane { a: -1.0, b: 0.0, c: 0.0 });
        lines.push(HalfPlane { a: 0.0, b: -1.0, c: 0.0 });

        let mut candidates = Vec::new();
        for (i, l1) in lines.iter().enumerate() {
            for l2 in &lines[i + 1..] {
                let det = l1.a * l2.b - l1.b * l2.a;
                let scale = (l1.a.abs() + l1.b.abs()) * (l2.a.abs() + l2.b.abs());
                if det.abs() <= 1e-14 * scale {
                    continue;
                }
                let x = (l1.c * l2.b - l1.b * l2.c) / det;
                let y = (l1.a * l2.c - l1.c * l2.a) / det;
                if self.contains((x, y), RATE_TOL) {
                    candidates.push((x.max(0.0), y.max(0.0)));
                }
            }
        }
        if candidates.is_empty() {
            return Err(Error::EmptyRegion);
        }
        Ok(convex_hull(candidates))
    }

    pub fn to_doc(&self) -> Result<RegionDoc> {
        Ok(RegionDoc {
            constraints: self.constraints.clone(),
            vertices: self.vertices()?.into_iter().map(|(x, y)| [x, y]).collect(),
        })
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain; drops duplicates (within `RATE_TOL`) and
/// collinear points.
fn convex_hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut uniq: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for p in pts {
        if !uniq
            .iter()
            .any(|q| (q.0 - p.0).abs() <= RATE_TOL && (q.1 - p.1).abs() <= RATE_TOL)
        {
            uniq.push(p);
        }
    }
    if uniq.len() <= 2 {
        return uniq;
    }
    let collinear_eps = 1e-12;
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &uniq {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= collinear_eps {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in uniq.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= collinear_eps {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Outer bound without cooperation: two sum-rate bounds and an `R2` cap.
pub fn outer_no_coop(p: &ChannelParams) -> RateRegion {
    let (snr1, snr2, inr2) = (p.snr1(), p.snr2(), p.inr2());
    RateRegion::new(vec![
        HalfPlane::sum(c_unchecked(snr1 + snr2)),
        HalfPlane::sum(interference_sum_bound(1.0 + snr1 + snr2, inr2) + c_unchecked(snr2)),
        HalfPlane::r2(c_unchecked(snr2)),
    ])
}

/// `C(num / inr2)`; inactive (`+inf`) when `inr2 = 0`.
fn interference_sum_bound(num: f64, inr2: f64) -> f64 {
    if inr2 == 0.0 {
        f64::INFINITY
    } else {
        c_unchecked(num / inr2)
    }
}

/// Lattice-layer sum rate `(1/2) log2+(1/2 + SNR2)`.
pub(crate) fn lattice_layer_rate(p: &ChannelParams) -> f64 {
    half_log2_plus(0.5 + p.snr2())
}

/// Layer-R rate without cooperation.
pub(crate) fn relay_layer_rate_no_coop(p: &ChannelParams) -> f64 {
    let (snr1, snr2) = (p.snr1(), p.snr2());
    c_unchecked((snr1 - snr2).max(0.0) / (1.0 + 2.0 * snr2 + p.inr2()))
}

pub fn inner_no_coop(p: &ChannelParams) -> RateRegion {
    let lattice = lattice_layer_rate(p);
    RateRegion::new(vec![
        HalfPlane::sum(lattice + relay_layer_rate_no_coop(p)),
        HalfPlane::r2(lattice),
    ])
}

pub fn outer_coop(p: &ChannelParams) -> RateRegion {
    let (snr1, snr2, inr2) = (p.snr1(), p.snr2(), p.inr2());
    let beam = snr1 + snr2 + 2.0 * (snr1 * snr2).sqrt();
    RateRegion::new(vec![
        HalfPlane::sum(c_unchecked(beam)),
        HalfPlane::sum(interference_sum_bound(1.0 + beam, inr2) + c_unchecked(snr2) + p.cb21),
        HalfPlane::r2(c_unchecked(snr2) + p.cb21),
    ])
}

/// Cooperation-layer sum rate `(C(thetaC/(No+2P2)) - 1/2)+`.
pub(crate) fn cooperation_layer_rate(p: &ChannelParams, s: &SchemeParams) -> f64 {
    positive_part(c_unchecked(s.theta_c / SchemeParams::layer_c_floor(p)) - 0.5)
}

/// Layer-R sum rate with the cooperation layer treated as noise.
pub(crate) fn relay_layer_rate_coop(p: &ChannelParams, s: &SchemeParams) -> f64 {
    c_unchecked(s.theta_r / (p.no + s.theta_c + 2.0 * p.p2 + p.q2))
}

pub fn inner_coop(p: &ChannelParams, s: &SchemeParams) -> RateRegion {
    let base = lattice_layer_rate(p) + cooperation_layer_rate(p, s);
    RateRegion::new(vec![
        HalfPlane::sum(base + relay_layer_rate_coop(p, s)),
        HalfPlane::r2(base + (p.cb21 - s.r21)),
    ])
}
