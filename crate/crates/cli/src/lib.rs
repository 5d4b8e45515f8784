//! Command-line front end: single-point evaluation, gap sweeps, lattice
//! simulations and plot data.
//!
//! Flags may also be given in a JSON config file (`--config`) whose keys are
//! the flag names with underscores; flags on the command line win.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use dirty_mac_core::regions::RegionDoc;
use dirty_mac_core::serde_ext;
use dirty_mac_core::sim::{run_claim1, Check, Layer};
use dirty_mac_core::sweep::{self, CSV_VERSION_LINE};
use dirty_mac_core::{
    inner_coop, inner_no_coop, outer_coop, outer_no_coop, run_layer_c, run_layer_l, run_layer_r,
    select_cooperation_power, verify_theorems, ChannelParams, GapReport, NoiseFamily, RateRegion, SchemeParams,
    SimReport, SweepConfig,
};

/// Version tag of every JSON document.
pub const DOC_VERSION: &str = "dirty-mac-lab v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Point,
    Sweep,
    Simulate,
    Verify,
    Plotdata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

fn parse_value(s: &str) -> std::result::Result<f64, String> {
    serde_ext::parse_f64(s).ok_or_else(|| format!("not a number: {s:?}"))
}

/// Counts accept scientific notation such as `1e6`.
fn parse_count(s: &str) -> std::result::Result<usize, String> {
    if let Ok(n) = s.trim().parse::<usize>() {
        return Ok(n);
    }
    match parse_value(s)? {
        x if x >= 0.0 && x.fract() == 0.0 && x <= usize::MAX as f64 => Ok(x as usize),
        _ => Err(format!("not a count: {s:?}")),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Parser, Serialize, Deserialize)]
#[command(name = "dirty-mac-lab", version, about = "Constant-gap bounds and lattice simulations for the doubly-dirty MAC")]
#[serde(default, deny_unknown_fields)]
pub struct Args {
    /// Tx1 power.
    #[arg(long, value_parser = parse_value)]
    #[serde(with = "serde_ext::option", skip_serializing_if = "Option::is_none")]
    pub p1: Option<f64>,
    /// Tx2 power.
    #[arg(long, value_parser = parse_value)]
    #[serde(with = "serde_ext::option", skip_serializing_if = "Option::is_none")]
    pub p2: Option<f64>,
    /// Variance of the interference known at Tx1 (`inf` allowed).
    #[arg(long, value_parser = parse_value)]
    #[serde(with = "serde_ext::option", skip_serializing_if = "Option::is_none")]
    pub q1: Option<f64>,
    /// Variance of the interference known at Tx2 (`inf` allowed).
    #[arg(long, value_parser = parse_value)]
    #[serde(with = "serde_ext::option", skip_serializing_if = "Option::is_none")]
    pub q2: Option<f64>,
    /// Receiver noise variance.
    #[arg(long, value_parser = parse_value)]
    #[serde(with = "serde_ext::option", skip_serializing_if = "Option::is_none")]
    pub no: Option<f64>,
    /// Conferencing capacity Tx1 -> Tx2, bits per channel use.
    #[arg(long, value_parser = parse_value)]
    #[serde(with = "serde_ext::option", skip_serializing_if = "Option::is_none")]
    pub cb12: Option<f64>,
    /// Conferencing capacity Tx2 -> Tx1, bits per channel use.
    #[arg(long, value_parser = parse_value)]
    #[serde(with = "serde_ext::option", skip_serializing_if = "Option::is_none")]
    pub cb21: Option<f64>,
    /// Read powers, noise and SNR/INR ranges in dB.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub db: bool,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    /// Simulated rounds per layer.
    #[arg(long, value_parser = parse_count)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Sweep worker threads (0 = all cores).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    /// Output file, or the output directory for `plotdata`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// JSON file with defaults for any of these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Sweep points.
    #[arg(long, value_parser = parse_count)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[arg(long, value_parser = parse_value)]
    #[serde(with = "serde_ext::option", skip_serializing_if = "Option::is_none")]
    pub snr_min: Option<f64>,
    #[arg(long, value_parser = parse_value)]
    #[serde(with = "serde_ext::option", skip_serializing_if = "Option::is_none")]
    pub snr_max: Option<f64>,
    #[arg(long, value_parser = parse_value)]
    #[serde(with = "serde_ext::option", skip_serializing_if = "Option::is_none")]
    pub inr_min: Option<f64>,
    #[arg(long, value_parser = parse_value)]
    #[serde(with = "serde_ext::option", skip_serializing_if = "Option::is_none")]
    pub inr_max: Option<f64>,
    #[arg(long, value_parser = parse_value)]
    #[serde(with = "serde_ext::option", skip_serializing_if = "Option::is_none")]
    pub cb21_min: Option<f64>,
    #[arg(long, value_parser = parse_value)]
    #[serde(with = "serde_ext::option", skip_serializing_if = "Option::is_none")]
    pub cb21_max: Option<f64>,
    /// Draw cb21 uniformly, without the extra mass at 0 and 1/2.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub no_atoms: bool,
    /// Simulated layers, comma separated: L, C, R, claim1.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<String>>,
    /// Alternative noise family of the claim1 check: gaussian, uniform, laplace.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<String>,
}

impl Args {
    /// Fields set here win over those set in `base`.
    fn over(&self, base: &Args) -> Args {
        Args {
            p1: self.p1.or(base.p1),
            p2: self.p2.or(base.p2),
            q1: self.q1.or(base.q1),
            q2: self.q2.or(base.q2),
            no: self.no.or(base.no),
            cb12: self.cb12.or(base.cb12),
            cb21: self.cb21.or(base.cb21),
            db: self.db || base.db,
            mode: self.mode.or(base.mode),
            n: self.n.or(base.n),
            seed: self.seed.or(base.seed),
            jobs: self.jobs.or(base.jobs),
            out: self.out.clone().or_else(|| base.out.clone()),
            format: self.format.or(base.format),
            config: None,
            count: self.count.or(base.count),
            snr_min: self.snr_min.or(base.snr_min),
            snr_max: self.snr_max.or(base.snr_max),
            inr_min: self.inr_min.or(base.inr_min),
            inr_max: self.inr_max.or(base.inr_max),
            cb21_min: self.cb21_min.or(base.cb21_min),
            cb21_max: self.cb21_max.or(base.cb21_max),
            no_atoms: self.no_atoms || base.no_atoms,
            layers: self.layers.clone().or_else(|| base.layers.clone()),
            noise: self.noise.clone().or_else(|| base.noise.clone()),
        }
    }
}

/// Fully resolved run settings, echoed into every JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    /// Linear-scale parameters as given, before relabelling.
    pub params: ChannelParams,
    pub sweep: SweepConfig,
    pub n: usize,
    pub seed: u64,
    pub jobs: usize,
    pub layers: Vec<Layer>,
    pub noise: NoiseFamily,
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn from_db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

impl RunConfig {
    pub fn from_args(args: &Args) -> Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str::<Args>(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => Args::default(),
        };
        let a = args.over(&file);
        let lin = |x: Option<f64>, default: f64| {
            let x = x.unwrap_or(default);
            if a.db {
                from_db(x)
            } else {
                x
            }
        };
        let params = ChannelParams::new(
            lin(a.p1, 10.0),
            lin(a.p2, 1.0),
            lin(a.q1, 10.0),
            lin(a.q2, 10.0),
            lin(a.no, 1.0),
            a.cb12.unwrap_or(0.0),
            a.cb21.unwrap_or(1.0),
        )?;

        let d = SweepConfig::default();
        let sweep = SweepConfig {
            count: a.count.unwrap_or(d.count),
            seed: a.seed.unwrap_or(d.seed),
            snr_min: a.snr_min.map_or(d.snr_min, |x| lin(Some(x), 0.0)),
            snr_max: a.snr_max.map_or(d.snr_max, |x| lin(Some(x), 0.0)),
            inr_min: a.inr_min.map_or(d.inr_min, |x| lin(Some(x), 0.0)),
            inr_max: a.inr_max.map_or(d.inr_max, |x| lin(Some(x), 0.0)),
            cb21_min: a.cb21_min.unwrap_or(d.cb21_min),
            cb21_max: a.cb21_max.unwrap_or(d.cb21_max),
            atoms: !a.no_atoms,
        };
        sweep.validate()?;

        let layers = match &a.layers {
            Some(names) => names.iter().map(|s| s.parse()).collect::<dirty_mac_core::Result<Vec<Layer>>>()?,
            None => vec![Layer::L, Layer::C, Layer::R],
        };
        if layers.is_empty() {
            bail!("--layers: select at least one layer");
        }
        let noise = match &a.noise {
            Some(s) => s.parse()?,
            None => NoiseFamily::Uniform,
        };
        let mode = a.mode.unwrap_or(Mode::Point);
        let n = a.n.unwrap_or(1_000_000);
        if n == 0 {
            bail!("--n: need at least one round");
        }
        Ok(RunConfig {
            mode,
            params,
            sweep,
            n,
            seed: a.seed.unwrap_or(0),
            jobs: a.jobs.unwrap_or(0),
            layers,
            noise,
            out: a.out,
            format: a.format.unwrap_or(if mode == Mode::Sweep { Format::Csv } else { Format::Json }),
        })
    }

    /// Parameters relabelled so that `p1 >= p2`.
    pub fn normalized(&self) -> Result<ChannelParams> {
        Ok(self.params.normalize()?)
    }
}

/// Result of a run; empty `failures` means every check passed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub failures: Vec<String>,
    /// Files written besides the main output.
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSet {
    pub outer_no_coop: RegionDoc,
    pub inner_no_coop: RegionDoc,
    pub outer_coop: RegionDoc,
    pub inner_coop: RegionDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDoc {
    pub version: String,
    pub config: RunConfig,
    pub params: ChannelParams,
    pub scheme: SchemeParams,
    pub regions: RegionSet,
    pub report: GapReport,
}

fn regions_of(p: &ChannelParams, s: &SchemeParams) -> [(&'static str, RateRegion); 4] {
    [
        ("outer_no_coop", outer_no_coop(p)),
        ("inner_no_coop", inner_no_coop(p)),
        ("outer_coop", outer_coop(p)),
        ("inner_coop", inner_coop(p, s)),
    ]
}

pub fn point_doc(cfg: &RunConfig) -> Result<PointDoc> {
    let p = cfg.normalized()?;
    let scheme = select_cooperation_power(&p)?;
    let [o_nc, i_nc, o_c, i_c] = regions_of(&p, &scheme).map(|(_, r)| r);
    Ok(PointDoc {
        version: DOC_VERSION.into(),
        config: cfg.clone(),
        params: p,
        scheme,
        regions: RegionSet {
            outer_no_coop: o_nc.to_doc()?,
            inner_no_coop: i_nc.to_doc()?,
            outer_coop: o_c.to_doc()?,
            inner_coop: i_c.to_doc()?,
        },
        report: verify_theorems(&p)?,
    })
}

/// Names every failed part of a gap report.
pub fn gap_failures(r: &GapReport) -> Vec<String> {
    let mut out = Vec::new();
    for (label, g) in [("no_coop", &r.no_coop), ("coop", &r.coop)] {
        if !g.shrink_pass {
            out.push(format!(
                "{label} shrink containment by ({}, {}): worst violation {}",
                g.g1_required, g.g2_required, g.worst_violation
            ));
        }
        if g.sum_gap > g.sum_gap_bound + dirty_mac_core::RATE_TOL {
            out.push(format!("{label} sum_gap {} exceeds {}", g.sum_gap, g.sum_gap_bound));
        }
        if g.r2_gap > g.r2_gap_bound + dirty_mac_core::RATE_TOL {
            out.push(format!("{label} r2_gap {} exceeds {}", g.r2_gap, g.r2_gap_bound));
        }
    }
    out
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn cmd_point(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let doc = point_doc(cfg)?;
    match cfg.format {
        Format::Json => write_json(&doc, out)?,
        Format::Csv => sweep::write_csv(std::slice::from_ref(&doc.report), out)?,
    }
    Ok(Outcome {
        failures: gap_failures(&doc.report),
        ..Outcome::default()
    })
}

pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let report = verify_theorems(&cfg.normalized()?)?;
    match cfg.format {
        Format::Json => write_json(&report, out)?,
        Format::Csv => sweep::write_csv(std::slice::from_ref(&report), out)?,
    }
    Ok(Outcome {
        failures: gap_failures(&report),
        ..Outcome::default()
    })
}

pub fn cmd_sweep(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let reports = sweep::run_sweep(&cfg.sweep, cfg.jobs)?;
    match cfg.format {
        Format::Csv => sweep::write_csv(&reports, out)?,
        Format::Json => sweep::write_json(&reports, out)?,
    }
    let s = sweep::summarize(&reports);
    let mut failures = Vec::new();
    if s.violations > 0 {
        let first: Vec<String> = reports
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.pass)
            .take(5)
            .map(|(i, _)| i.to_string())
            .collect();
        failures.push(format!(
            "sweep: {} of {} points fail (max_violation {}), first at indices {}",
            s.violations,
            s.points,
            s.max_violation,
            first.join(", ")
        ));
    }
    Ok(Outcome {
        failures,
        ..Outcome::default()
    })
}

/// One check of one simulated layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerCheck {
    pub layer: Layer,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimDoc {
    pub version: String,
    pub config: RunConfig,
    pub reports: Vec<SimReport>,
    pub checks: Vec<LayerCheck>,
    pub pass: bool,
}

pub fn simulate(cfg: &RunConfig) -> Result<SimDoc> {
    let p = cfg.normalized()?;
    let s = select_cooperation_power(&p)?;
    let mut reports = Vec::new();
    for layer in &cfg.layers {
        reports.push(match layer {
            Layer::L => run_layer_l(&p, cfg.n, cfg.seed)?,
            Layer::C => run_layer_c(&p, &s, cfg.n, cfg.seed)?,
            Layer::R => run_layer_r(&p, &s, cfg.n, cfg.seed)?,
            Layer::Claim1 => run_claim1(p.p1, p.q1, p.no, cfg.noise, cfg.n, cfg.seed)?,
        });
    }
    let checks: Vec<LayerCheck> = reports
        .iter()
        .flat_map(|r| r.checks().into_iter().map(|check| LayerCheck { layer: r.layer, check }))
        .collect();
    Ok(SimDoc {
        version: DOC_VERSION.into(),
        config: cfg.clone(),
        pass: checks.iter().all(|c| c.check.pass),
        reports,
        checks,
    })
}

pub fn cmd_simulate(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let doc = simulate(cfg)?;
    match cfg.format {
        Format::Json => write_json(&doc, out)?,
        Format::Csv => {
            writeln!(out, "{CSV_VERSION_LINE}")?;
            writeln!(out, "layer,check,value,threshold,pass")?;
            for c in &doc.checks {
                let k = &c.check;
                writeln!(out, "{},{},{},{},{}", c.layer, k.name, k.value, k.threshold, k.pass)?;
            }
        }
    }
    let failures = doc
        .checks
        .iter()
        .filter(|c| !c.check.pass)
        .map(|c| format!("layer {}: {} = {} (threshold {})", c.layer, c.check.name, c.check.value, c.check.threshold))
        .collect();
    Ok(Outcome {
        failures,
        ..Outcome::default()
    })
}

/// Closed polyline of a region's vertices as `r1,r2` rows.
pub fn polyline_csv(region: &RateRegion) -> Result<String> {
    let mut v = region.vertices()?;
    if v.len() > 1 {
        v.push(v[0]);
    }
    let mut s = format!("{CSV_VERSION_LINE}\nr1,r2\n");
    for (a, b) in v {
        s.push_str(&format!("{a},{b}\n"));
    }
    Ok(s)
}

/// Writes one polyline file per region into `dir`.
pub fn cmd_plotdata(cfg: &RunConfig, dir: &Path) -> Result<Outcome> {
    let p = cfg.normalized()?;
    let s = select_cooperation_power(&p)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut files = Vec::new();
    for (name, region) in regions_of(&p, &s) {
        let path = dir.join(format!("{name}.csv"));
        fs::write(&path, polyline_csv(&region)?).with_context(|| format!("writing {}", path.display()))?;
        files.push(path);
    }
    Ok(Outcome {
        files,
        ..Outcome::default()
    })
}

/// Runs `cfg`, writing the main output to `stdout` unless `--out` is set.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<Outcome> {
    if cfg.mode == Mode::Plotdata {
        let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
        let outcome = cmd_plotdata(cfg, &dir)?;
        for f in &outcome.files {
            writeln!(stdout, "{}", f.display())?;
        }
        return Ok(outcome);
    }
    let mut file;
    let out: &mut dyn Write = match &cfg.out {
        Some(path) => {
            file = io::BufWriter::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?);
            &mut file
        }
        None => stdout,
    };
    let outcome = match cfg.mode {
        Mode::Point => cmd_point(cfg, out)?,
        Mode::Verify => cmd_verify(cfg, out)?,
        Mode::Sweep => cmd_sweep(cfg, out)?,
        Mode::Simulate => cmd_simulate(cfg, out)?,
        Mode::Plotdata => unreachable!("handled above"),
    };
    out.flush()?;
    Ok(outcome)
}

pub fn run(args: &Args) -> Result<Outcome> {
    let cfg = RunConfig::from_args(args)?;
    execute(&cfg, &mut io::stdout().lock())
}
