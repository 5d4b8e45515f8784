//! Per-layer rate constraints and their Fourier-Motzkin projection onto
//! `(R1, R2)`.
//!
//! Every variable is implicitly nonnegative. During elimination the
//! nonnegativity of the variable being removed is materialized as a row;
//! nonnegativity of kept variables stays implicit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ChannelParams, SchemeParams};
use crate::regions::{self, HalfPlane, RateRegion};
use crate::serde_ext;

/// Coefficients with magnitude at or below this are treated as zero.
pub const SIGN_EPS: f64 = 1e-12;
/// Slack allowed when deciding that one row implies another.
pub const REDUNDANCY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coeffs: Vec<f64>,
    #[serde(with = "serde_ext")]
    pub rhs: f64,
}

/// `rows[k].coeffs . vars <= rows[k].rhs`, with `vars >= 0`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LinearSystem {
    pub varnames: Vec<String>,
    pub rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new<S: AsRef<str>>(varnames: &[S]) -> Self {
        LinearSystem {
            varnames: varnames.iter().map(|s| s.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.varnames
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn dense(&self, terms: &[(&str, f64)]) -> Result<Vec<f64>> {
        let mut coeffs = vec![0.0; self.varnames.len()];
        for (name, c) in terms {
            coeffs[self.index_of(name)?] += c;
        }
        Ok(coeffs)
    }

    /// Adds `sum(terms) <= rhs`.
    pub fn add_le(&mut self, terms: &[(&str, f64)], rhs: f64) -> Result<()> {
        let coeffs = self.dense(terms)?;
        self.rows.push(Row { coeffs, rhs });
        Ok(())
    }

    /// Adds `sum(terms) = rhs` as a pair of opposite inequalities.
    pub fn add_eq(&mut self, terms: &[(&str, f64)], rhs: f64) -> Result<()> {
        let coeffs = self.dense(terms)?;
        let neg = coeffs.iter().map(|c| -c).collect();
        self.rows.push(Row { coeffs, rhs });
        self.rows.push(Row { coeffs: neg, rhs: -rhs });
        Ok(())
    }

    /// Whether `point` (indexed like `varnames`) satisfies every row and
    /// nonnegativity within `tol`.
    pub fn is_satisfied_by(&self, point: &[f64], tol: f64) -> bool {
        point.iter().all(|&x| x >= -tol)
            && self.rows.iter().all(|r| {
                r.rhs == f64::INFINITY || dot(&r.coeffs, point) <= r.rhs + tol
            })
    }

    /// Interprets a system over exactly `{R1, R2}` as a rate region.
    pub fn to_region(&self) -> Result<RateRegion> {
        let i1 = self.index_of("R1")?;
        let i2 = self.index_of("R2")?;
        if self.varnames.len() != 2 {
            return Err(Error::Domain(format!(
                "expected a system over R1, R2 only, got {:?}",
                self.varnames
            )));
        }
        let mut constraints = Vec::new();
        for r in &self.rows {
            let (a, b) = (r.coeffs[i1], r.coeffs[i2]);
            if a.abs() <= SIGN_EPS && b.abs() <= SIGN_EPS {
                if r.rhs < -REDUNDANCY_TOL {
                    return Err(Error::EmptyRegion);
                }
                continue;
            }
            constraints.push(HalfPlane::new(a, b, r.rhs)?);
        }
        Ok(RateRegion::new(constraints))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalized(mut row: Row) -> Row {
    let scale = row.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale > 0.0 {
        row.coeffs.iter_mut().for_each(|c| *c /= scale);
        row.rhs /= scale;
    }
    row
}

/// Whether `row` is implied by `other` together with `vars >= 0`, i.e. there
/// is `lambda >= 0` with `row.coeffs <= lambda * other.coeffs` componentwise
/// and `lambda * other.rhs <= row.rhs`.
fn implied_by(row: &Row, other: &Row) -> bool {
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    for (&c, &o) in row.coeffs.iter().zip(&other.coeffs) {
        if o > SIGN_EPS {
            lo = lo.max(c / o);
        } else if o < -SIGN_EPS {
            hi = hi.min(c / o);
        } else if c > SIGN_EPS {
            return false;
        }
    }
    if lo > hi + SIGN_EPS {
        return false;
    }
    let lambda = if other.rhs >= 0.0 { lo } else { hi };
    if !lambda.is_finite() {
        return false;
    }
    if lambda == 0.0 {
        return row.rhs >= -REDUNDANCY_TOL;
    }
    lambda * other.rhs <= row.rhs + REDUNDANCY_TOL
}

/// Whether `row` is implied by nonnegativity alone.
fn trivially_true(row: &Row) -> bool {
    row.rhs == f64::INFINITY || (row.coeffs.iter().all(|&c| c <= SIGN_EPS) && row.rhs >= -REDUNDANCY_TOL)
}

fn prune(rows: Vec<Row>) -> Vec<Row> {
    let rows: Vec<Row> = rows.into_iter().filter(|r| !trivially_true(r)).map(normalized).collect();
    let mut keep = vec![true; rows.len()];
    for i in 0..rows.len() {
        for j in 0..rows.len() {
            if i == j || !keep[j] {
                continue;
            }
            if implied_by(&rows[i], &rows[j]) {
                // Mutually implied rows: keep the earlier one.
                if implied_by(&rows[j], &rows[i]) && i < j {
                    continue;
                }
                keep[i] = false;
                break;
            }
        }
    }
    rows.into_iter().zip(keep).filter_map(|(r, k)| k.then_some(r)).collect()
}

fn eliminate_column(rows: Vec<Row>, col: usize, width: usize) -> Vec<Row> {
    let mut nonneg = vec![0.0; width];
    nonneg[col] = -1.0;
    let all = rows.into_iter().chain(std::iter::once(Row { coeffs: nonneg, rhs: 0.0 }));

    let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for mut r in all {
        let c = r.coeffs[col];
        if c > SIGN_EPS {
            pos.push(r);
        } else if c < -SIGN_EPS {
            neg.push(r);
        } else {
            r.coeffs[col] = 0.0;
            out.push(r);
        }
    }
    for p in &pos {
        for n in &neg {
            let (wp, wn) = (-n.coeffs[col], p.coeffs[col]);
            let mut coeffs: Vec<f64> = p.coeffs.iter().zip(&n.coeffs).map(|(a, b)| wp * a + wn * b).collect();
            coeffs[col] = 0.0;
            out.push(Row {
                coeffs,
                rhs: wp * p.rhs + wn * n.rhs,
            });
        }
    }
    prune(out)
}

/// Projects `sys` onto the variables in `keep` (returned in `keep` order).
///
/// Variables are eliminated one at a time in lexicographic order of their
/// names.
pub fn fme_eliminate<S: AsRef<str>>(sys: &LinearSystem, keep: &[S]) -> Result<LinearSystem> {
    let keep_idx: Vec<usize> = keep.iter().map(|k| sys.index_of(k.as_ref())).collect::<Result<_>>()?;
    let mut drop: Vec<usize> = (0..sys.varnames.len()).filter(|i| !keep_idx.contains(i)).collect();

    let select = |rows: &[Row]| -> Vec<Row> {
        rows.iter()
            .map(|r| Row {
                coeffs: keep_idx.iter().map(|&i| r.coeffs[i]).collect(),
                rhs: r.rhs,
            })
            .collect()
    };
    let varnames = keep.iter().map(|k| k.as_ref().to_string()).collect();
    if drop.is_empty() {
        return Ok(LinearSystem {
            varnames,
            rows: select(&sys.rows),
        });
    }

    drop.sort_by(|&a, &b| sys.varnames[a].cmp(&sys.varnames[b]));
    let width = sys.varnames.len();
    let mut rows = sys.rows.clone();
    for col in drop {
        rows = eliminate_column(rows, col, width);
    }
    Ok(LinearSystem {
        varnames,
        rows: select(&rows),
    })
}

pub const NO_COOP_VARS: [&str; 5] = ["R1L", "R2L", "R1R", "R1", "R2"];
pub const COOP_VARS: [&str; 8] = ["R1L", "R2L", "R1C", "R2C", "R1R", "R2R", "R1", "R2"];

/// Lattice layer L shared by both users plus Tx1's dirty-paper layer R.
pub fn build_layer_system_no_coop(p: &ChannelParams) -> LinearSystem {
    let mut sys = LinearSystem::new(&NO_COOP_VARS);
    let rows: Result<()> = (|| {
        sys.add_le(&[("R1L", 1.0), ("R2L", 1.0)], regions::lattice_layer_rate(p))?;
        sys.add_le(&[("R1R", 1.0)], regions::relay_layer_rate_no_coop(p))?;
        sys.add_eq(&[("R1", 1.0), ("R1L", -1.0), ("R1R", -1.0)], 0.0)?;
        sys.add_eq(&[("R2", 1.0), ("R2L", -1.0)], 0.0)
    })();
    rows.expect("layer variables are declared");
    sys
}

/// Layers L, C and R with the cooperation-link cap on user 2's relayed rate.
pub fn build_layer_system_coop(p: &ChannelParams, s: &SchemeParams) -> LinearSystem {
    let mut sys = LinearSystem::new(&COOP_VARS);
    let rows: Result<()> = (|| {
        sys.add_le(&[("R1L", 1.0), ("R2L", 1.0)], regions::lattice_layer_rate(p))?;
        sys.add_le(&[("R1C", 1.0), ("R2C", 1.0)], regions::cooperation_layer_rate(p, s))?;
        sys.add_le(&[("R1R", 1.0), ("R2R", 1.0)], regions::relay_layer_rate_coop(p, s))?;
        sys.add_le(&[("R2R", 1.0)], p.cb21 - s.r21)?;
        sys.add_eq(&[("R1", 1.0), ("R1L", -1.0), ("R1C", -1.0), ("R1R", -1.0)], 0.0)?;
        sys.add_eq(&[("R2", 1.0), ("R2L", -1.0), ("R2C", -1.0), ("R2R", -1.0)], 0.0)
    })();
    rows.expect("layer variables are declared");
    sys
}

/// The FME projection of a layer system onto `(R1, R2)` as a region.
pub fn project_to_region(sys: &LinearSystem) -> Result<RateRegion> {
    fme_eliminate(sys, &["R1", "R2"])?.to_region()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::select_cooperation_power;
    use approx::assert_abs_diff_eq;

    fn row_of(sys: &LinearSystem, terms: &[(&str, f64)]) -> Option<f64> {
        let want = sys.dense(terms).unwrap();
        sys.rows
            .iter()
            .find(|r| r.coeffs.iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-12))
            .map(|r| r.rhs)
    }

    #[test]
    fn hand_elimination_matches_layered_shape() {
        let (a, b) = (0.7, 1.3);
        let mut sys = LinearSystem::new(&["x", "y", "z", "R1", "R2"]);
        sys.add_le(&[("x", 1.0), ("y", 1.0)], a).unwrap();
        sys.add_le(&[("z", 1.0)], b).unwrap();
        sys.add_eq(&[("R1", 1.0), ("x", -1.0), ("z", -1.0)], 0.0).unwrap();
        sys.add_eq(&[("R2", 1.0), ("y", -1.0)], 0.0).unwrap();
        let out = fme_eliminate(&sys, &["R1", "R2"]).unwrap();
        assert_eq!(out.varnames, vec!["R1", "R2"]);
        assert_eq!(out.rows.len(), 2, "{:?}", out.rows);
        assert_abs_diff_eq!(row_of(&out, &[("R1", 1.0), ("R2", 1.0)]).unwrap(), a + b, epsilon = 1e-12);
        assert_abs_diff_eq!(row_of(&out, &[("R2", 1.0)]).unwrap(), a, epsilon = 1e-12);
    }

    #[test]
    fn keeping_everything_is_identity() {
        let p = ChannelParams::new(5.0, 2.0, 1.0, 3.0, 1.0, 0.0, 0.0).unwrap();
        let sys = build_layer_system_no_coop(&p);
        assert_eq!(fme_eliminate(&sys, &NO_COOP_VARS).unwrap(), sys);
    }

    #[test]
    fn empty_system_stays_empty() {
        let sys = LinearSystem::new(&["a", "b", "R1", "R2"]);
        let out = fme_eliminate(&sys, &["R1", "R2"]).unwrap();
        assert!(out.rows.is_empty());
    }

    #[test]
    fn unknown_keep_variable() {
        let sys = LinearSystem::new(&["R1", "R2"]);
        assert_eq!(fme_eliminate(&sys, &["R3"]), Err(Error::UnknownVariable("R3".into())));
    }

    #[test]
    fn no_coop_layer_bounds() {
        let p = ChannelParams::new(1.5, 1.5, 1.0, 3.0, 1.0, 0.0, 0.0).unwrap();
        let sys = build_layer_system_no_coop(&p);
        assert_eq!(row_of(&sys, &[("R1R", 1.0)]), Some(0.0));
        assert_abs_diff_eq!(row_of(&sys, &[("R1L", 1.0), ("R2L", 1.0)]).unwrap(), 0.5, epsilon = 1e-15);

        let p = ChannelParams::new(1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 0.0).unwrap();
        let sys = build_layer_system_no_coop(&p);
        assert_eq!(row_of(&sys, &[("R1L", 1.0), ("R2L", 1.0)]), Some(0.0));
    }

    #[test]
    fn coop_layer_bounds() {
        let p = ChannelParams::new(10.0, 1.0, 1.0, 100.0, 1.0, 0.0, 0.3).unwrap();
        let s = select_cooperation_power(&p).unwrap();
        let sys = build_layer_system_coop(&p, &s);
        assert_eq!(row_of(&sys, &[("R1C", 1.0), ("R2C", 1.0)]), Some(0.0));
        assert_eq!(row_of(&sys, &[("R2R", 1.0)]), Some(0.3));

        let p = ChannelParams::new(10.0, 1.0, 1.0, 100.0, 1.0, 0.0, 1.0).unwrap();
        let s = select_cooperation_power(&p).unwrap();
        let sys = build_layer_system_coop(&p, &s);
        assert_abs_diff_eq!(
            row_of(&sys, &[("R1C", 1.0), ("R2C", 1.0)]).unwrap(),
            0.292_481_250_360_578_1,
            epsilon = 1e-15
        );

        let p = ChannelParams::new(3.0, 1.0, 1.0, 100.0, 1.0, 0.0, 2.0).unwrap();
        let s = select_cooperation_power(&p).unwrap();
        let sys = build_layer_system_coop(&p, &s);
        assert_eq!(row_of(&sys, &[("R1R", 1.0), ("R2R", 1.0)]), Some(0.0));
    }

    #[test]
    fn projection_reproduces_closed_forms_at_a_point() {
        let p = ChannelParams::new(40.0, 3.0, 2.0, 5.0, 1.0, 0.0, 1.7).unwrap();
        let s = select_cooperation_power(&p).unwrap();
        let fme = project_to_region(&build_layer_system_coop(&p, &s)).unwrap();
        let closed = regions::inner_coop(&p, &s);
        let (a, b) = (fme.vertices().unwrap(), closed.vertices().unwrap());
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x.0, y.0, epsilon = 1e-9);
            assert_abs_diff_eq!(x.1, y.1, epsilon = 1e-9);
        }
    }

    #[test]
    fn system_json_round_trip() {
        let p = ChannelParams::new(5.0, 2.0, 1.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        let sys = build_layer_system_no_coop(&p);
        let s = serde_json::to_string(&sys).unwrap();
        assert_eq!(serde_json::from_str::<LinearSystem>(&s).unwrap(), sys);
    }
}
