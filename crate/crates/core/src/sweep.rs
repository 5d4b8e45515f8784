//! Parameter sweeps for the constant-gap checks.
//!
//! SNR and INR values are drawn log-uniformly; `cb21` uniformly, with the
//! branch-switch atoms `0` and `1/2` mixed in. Point `i` is drawn from its own
//! stream, so the sweep is reproducible for any number of worker threads.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gap::{verify_theorems, GapReport};
use crate::params::ChannelParams;
use crate::sim::rng::Substreams;

/// Version tag written as the first line of every CSV file.
pub const CSV_VERSION_LINE: &str = "# dirty-mac-lab v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub count: usize,
    pub seed: u64,
    pub snr_min: f64,
    pub snr_max: f64,
    pub inr_min: f64,
    pub inr_max: f64,
    pub cb21_min: f64,
    pub cb21_max: f64,
    /// Mix the atoms `{0, 1/2}` into the `cb21` draw when they are in range.
    pub atoms: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            count: 10_000,
            seed: 0,
            snr_min: 1e-3,
            snr_max: 1e6,
            inr_min: 1e-3,
            inr_max: 1e6,
            cb21_min: 0.0,
            cb21_max: 8.0,
            atoms: true,
        }
    }
}

impl SweepConfig {
    /// Sweep with the cooperation link switched off.
    pub fn without_cooperation() -> Self {
        SweepConfig {
            cb21_max: 0.0,
            atoms: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::invalid("count", "sweep needs at least one point"));
        }
        for (name, lo, hi) in [("snr", self.snr_min, self.snr_max), ("inr", self.inr_min, self.inr_max)] {
            if !(lo > 0.0 && hi.is_finite() && lo <= hi) {
                return Err(Error::invalid(name, format!("range [{lo}, {hi}] must be positive, finite and nonempty")));
            }
        }
        if !(self.cb21_min >= 0.0 && self.cb21_max.is_finite() && self.cb21_min <= self.cb21_max) {
            return Err(Error::invalid("cb21", "range must be finite, nonnegative and nonempty"));
        }
        Ok(())
    }

    fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            return lo;
        }
        let (a, b) = (lo.ln(), hi.ln());
        (a + (b - a) * rng.random::<f64>()).exp()
    }

    /// The normalized parameters of point `index` (`No = 1`).
    pub fn point(&self, index: usize) -> Result<ChannelParams> {
        let mut rng = Substreams::new(self.seed, "sweep").stream(crate::sim::rng::Role::Noise, index as u64);
        let snr1 = Self::log_uniform(&mut rng, self.snr_min, self.snr_max);
        let snr2 = Self::log_uniform(&mut rng, self.snr_min, self.snr_max);
        let inr1 = Self::log_uniform(&mut rng, self.inr_min, self.inr_max);
        let inr2 = Self::log_uniform(&mut rng, self.inr_min, self.inr_max);
        let u: f64 = rng.random();
        let pick: f64 = rng.random();
        let in_range = |x: f64| self.cb21_min <= x && x <= self.cb21_max;
        let cb21 = if self.atoms && self.cb21_min < self.cb21_max && pick < 0.05 && in_range(0.0) {
            0.0
        } else if self.atoms && self.cb21_min < self.cb21_max && (0.05..0.10).contains(&pick) && in_range(0.5) {
            0.5
        } else {
            self.cb21_min + (self.cb21_max - self.cb21_min) * u
        };
        // Draw cb12 as well so the relabelling path is exercised.
        let cb12 = self.cb21_min + (self.cb21_max - self.cb21_min) * rng.random::<f64>();
        let raw = ChannelParams::new(snr1, snr2, inr1, inr2, 1.0, cb12, cb21)?;
        // Keep the drawn cb21 on the stronger user's link after relabelling.
        let raw = if snr1 < snr2 { ChannelParams { cb12: cb21, cb21: cb12, ..raw } } else { raw };
        raw.normalize()
    }
}

/// Verifies every sweep point, using `jobs` worker threads (0 = all cores).
/// Reports come back in point order.
pub fn run_sweep(cfg: &SweepConfig, jobs: usize) -> Result<Vec<GapReport>> {
    cfg.validate()?;
    let eval = || -> Result<Vec<GapReport>> {
        (0..cfg.count)
            .into_par_iter()
            .map(|i| verify_theorems(&cfg.point(i)?))
            .collect()
    };
    if jobs == 0 {
        eval()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Simulation(e.to_string()))?
            .install(eval)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub points: usize,
    pub violations: usize,
    pub max_violation: f64,
}

pub fn summarize(reports: &[GapReport]) -> SweepSummary {
    SweepSummary {
        points: reports.len(),
        violations: reports.iter().filter(|r| !r.pass).count(),
        max_violation: reports.iter().map(|r| r.worst_violation).fold(0.0, f64::max),
    }
}

const CSV_HEADER: [&str; 38] = [
    "index",
    "p1",
    "p2",
    "q1",
    "q2",
    "no",
    "cb12",
    "cb21",
    "swapped",
    "snr1",
    "snr2",
    "inr2",
    "outer_nc_sum1",
    "outer_nc_sum2",
    "outer_nc_r2",
    "inner_nc_sum",
    "inner_nc_r2",
    "outer_c_sum1",
    "outer_c_sum2",
    "outer_c_r2",
    "inner_c_sum",
    "inner_c_r2",
    "theta_c",
    "r21",
    "appendix_case",
    "nc_shrink_pass",
    "nc_worst_violation",
    "nc_sum_gap",
    "nc_r2_gap",
    "c_shrink_pass",
    "c_worst_violation",
    "c_sum_gap",
    "c_r2_gap",
    "analytic_sum_gap_bound",
    "analytic_r2_gap_bound",
    "worst_violation",
    "pass",
    "nc_pass",
];

/// One CSV record per report.
pub fn csv_record(index: usize, r: &GapReport) -> Vec<String> {
    let p = &r.params;
    let f = |x: f64| x.to_string();
    let b = &r.bounds;
    let mut rec = vec![
        index.to_string(),
        f(p.p1),
        f(p.p2),
        f(p.q1),
        f(p.q2),
        f(p.no),
        f(p.cb12),
        f(p.cb21),
        p.swapped.to_string(),
        f(p.snr1()),
        f(p.snr2()),
        f(p.inr2()),
    ];
    rec.extend(b.outer_no_coop.iter().chain(&b.inner_no_coop).chain(&b.outer_coop).chain(&b.inner_coop).map(|&x| f(x)));
    rec.extend([
        f(r.scheme.theta_c),
        f(r.scheme.r21),
        r.appendix_case.to_string(),
        r.no_coop.shrink_pass.to_string(),
        f(r.no_coop.worst_violation),
        f(r.no_coop.sum_gap),
        f(r.no_coop.r2_gap),
        r.coop.shrink_pass.to_string(),
        f(r.coop.worst_violation),
        f(r.coop.sum_gap),
        f(r.coop.r2_gap),
        f(r.analytic_sum_gap_bound),
        f(r.analytic_r2_gap_bound),
        f(r.worst_violation),
        r.pass.to_string(),
        r.no_coop.pass.to_string(),
    ]);
    rec
}

/// Writes the versioned CSV: tag line, header, one row per report, footer.
pub fn write_csv<W: Write>(reports: &[GapReport], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_VERSION_LINE}")?;
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(CSV_HEADER)?;
        for (i, r) in reports.iter().enumerate() {
            w.write_record(csv_record(i, r))?;
        }
        w.flush()?;
    }
    let s = summarize(reports);
    writeln!(
        out,
        "# points: {} violations: {} max_violation: {}",
        s.points, s.violations, s.max_violation
    )?;
    Ok(())
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    version: &'static str,
    reports: &'a [GapReport],
    summary: SweepSummary,
}

pub fn write_json<W: Write>(reports: &[GapReport], mut out: W) -> Result<()> {
    let doc = SweepDoc {
        version: "dirty-mac-lab v1",
        reports,
        summary: summarize(reports),
    };
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_are_normalized_and_in_range() {
        let cfg = SweepConfig {
            count: 500,
            ..SweepConfig::default()
        };
        for i in 0..cfg.count {
            let p = cfg.point(i).unwrap();
            assert!(p.p1 >= p.p2);
            assert!((1e-3..=1e6).contains(&p.p2));
            assert!((0.0..=8.0).contains(&p.cb21));
        }
        let atoms = (0..cfg.count).filter(|&i| [0.0, 0.5].contains(&cfg.point(i).unwrap().cb21)).count();
        assert!(atoms > 20, "{atoms}");
    }

    #[test]
    fn degenerate_ranges_give_the_point() {
        let cfg = SweepConfig {
            count: 1,
            snr_min: 10.0,
            snr_max: 10.0,
            inr_min: 3.0,
            inr_max: 3.0,
            cb21_min: 1.0,
            cb21_max: 1.0,
            ..SweepConfig::default()
        };
        let p = cfg.point(0).unwrap();
        assert_eq!((p.p1, p.p2, p.q1, p.q2, p.cb21), (10.0, 10.0, 3.0, 3.0, 1.0));
    }

    #[test]
    fn bad_ranges_rejected() {
        let bad = SweepConfig {
            snr_min: 0.0,
            ..SweepConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SweepConfig {
            count: 0,
            ..SweepConfig::default()
        };
        assert!(run_sweep(&bad, 1).is_err());
    }

    #[test]
    fn csv_is_schedule_independent() {
        let cfg = SweepConfig {
            count: 300,
            seed: 17,
            ..SweepConfig::default()
        };
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&run_sweep(&cfg, 1).unwrap(), &mut a).unwrap();
        write_csv(&run_sweep(&cfg, 4).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("# dirty-mac-lab v1\nindex,p1,"));
        assert!(text.trim_end().ends_with("max_violation: 0"), "{}", text.lines().last().unwrap());
        assert_eq!(text.lines().count(), 300 + 3);
    }
}
