//! Sample-level Monte Carlo of the layered modulo-lattice scheme.
//!
//! A scalar lattice `q Z` stands in for the high-dimensional shaping
//! lattices: the receiver-side identities and the second-order statistics
//! of the effective noise do not depend on the dimension. Rates are not
//! simulated; only the quantities the rate formulas consume are.
//!
//! Rounds are generated in blocks of [`rng::BLOCK_LEN`]. Each (role, block)
//! pair has its own stream, blocks run in parallel, and results are
//! concatenated in block order, so every report is independent of the
//! thread schedule.

pub mod lattice;
pub mod mi;
pub mod rng;
pub mod stats;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::params::{ChannelParams, SchemeParams};
use crate::regions::c_unchecked;
use crate::serde_ext;
use lattice::{lattice_for_power, ScalarLattice};
use rng::{Role, Substreams, BLOCK_LEN};

/// Identity residual allowed, relative to the cell width.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Relative error allowed on effective-noise variances.
pub const VARIANCE_REL_TOL: f64 = 0.01;
/// KS threshold for uniformity of dithered signals.
pub const KS_UNIFORM_TOL: f64 = 0.005;
/// KS threshold for invariance of the layer-L output to interference scaling.
pub const KS_INVARIANCE_TOL: f64 = 0.01;
/// Interference scale used by the invariance comparison.
pub const INTERFERENCE_SCALE: f64 = 100.0;
/// Relative slack on per-transmitter average power.
pub const POWER_REL_TOL: f64 = 0.01;
/// Tolerance on the worst-case-noise mutual-information comparisons, in bits.
pub const MI_TOL: f64 = 0.02;
/// Smallest sample count accepted by the mutual-information check.
pub const MI_MIN_SAMPLES: usize = 10_000;
/// Bins per axis of the mutual-information estimator.
pub const MI_BINS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Layer {
    L,
    C,
    R,
    Claim1,
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layer::L => "L",
            Layer::C => "C",
            Layer::R => "R",
            Layer::Claim1 => "claim1",
        })
    }
}

impl FromStr for Layer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "L" | "l" => Ok(Layer::L),
            "C" | "c" => Ok(Layer::C),
            "R" | "r" => Ok(Layer::R),
            "claim1" => Ok(Layer::Claim1),
            other => Err(Error::invalid("layer", format!("unknown layer {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseFamily {
    Gaussian,
    Uniform,
    Laplace,
}

impl FromStr for NoiseFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gaussian" => Ok(NoiseFamily::Gaussian),
            "uniform" => Ok(NoiseFamily::Uniform),
            "laplace" => Ok(NoiseFamily::Laplace),
            other => Err(Error::invalid("noise", format!("unknown noise family {other:?}"))),
        }
    }
}

impl NoiseFamily {
    /// Unit-variance sample.
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            NoiseFamily::Gaussian => rng.sample(StandardNormal),
            NoiseFamily::Uniform => 3f64.sqrt() * (2.0 * rng.random::<f64>() - 1.0),
            NoiseFamily::Laplace => {
                // inverse CDF with scale 1/sqrt(2)
                let u: f64 = rng.random::<f64>() - 0.5;
                -u.signum() * (1.0 - 2.0 * u.abs()).ln() / 2f64.sqrt()
            }
        }
    }
}

/// Every signal of one channel use.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Round {
    pub s1: f64,
    pub s2: f64,
    pub z: f64,
    pub x1r: f64,
    pub v1l: f64,
    pub v2l: f64,
    pub d1l: f64,
    pub d2l: f64,
    pub x1l: f64,
    pub x2l: f64,
    pub v1c: f64,
    pub v2c: f64,
    pub d1c: f64,
    pub zhat: f64,
    pub x2c: f64,
    pub x1c: f64,
    pub y: f64,
    /// Receiver transform of layer L.
    pub yl: f64,
    /// `[v1l + v2l + zeff_l] mod` the layer-L lattice.
    pub yl_direct: f64,
    pub zeff_l: f64,
    pub yc: f64,
    pub yc_direct: f64,
    pub zeff_c: f64,
    /// Aggregate noise seen by layer R.
    pub zr: f64,
}

impl Round {
    pub fn x1_total(&self) -> f64 {
        self.x1r + self.x1c + self.x1l
    }
}

/// Transmitters and receiver of the layered scheme.
#[derive(Debug, Clone)]
pub struct LayeredModel {
    pub params: ChannelParams,
    pub scheme: SchemeParams,
    pub lattice_l: ScalarLattice,
    pub lattice_c: ScalarLattice,
}

fn finite_params(p: &ChannelParams) -> Result<()> {
    p.validate()?;
    if !p.q1.is_finite() || !p.q2.is_finite() {
        return Err(Error::Simulation("interference variances must be finite to simulate".into()));
    }
    if !p.is_normalized() {
        return Err(Error::invalid("p1", "parameters must be normalized (p1 >= p2)"));
    }
    Ok(())
}

impl LayeredModel {
    pub fn new(params: &ChannelParams, scheme: &SchemeParams) -> Result<Self> {
        finite_params(params)?;
        Ok(LayeredModel {
            params: *params,
            scheme: *scheme,
            lattice_l: lattice_for_power(scheme.theta_l)?,
            lattice_c: lattice_for_power(scheme.theta_c)?,
        })
    }

    fn block_rounds(&self, streams: &Substreams, block: usize, len: usize, interference_scale: f64) -> Vec<Round> {
        let b = block as u64;
        let rs = |role| streams.stream(role, b);
        let (mut g_s1, mut g_s2, mut g_z, mut g_r) = (
            rs(Role::Interference1),
            rs(Role::Interference2),
            rs(Role::Noise),
            rs(Role::RelayCodeword),
        );
        let (mut u_v1l, mut u_v2l, mut u_d1l, mut u_d2l) =
            (rs(Role::CodewordL1), rs(Role::CodewordL2), rs(Role::DitherL1), rs(Role::DitherL2));
        let (mut u_v1c, mut u_v2c, mut u_d1c, mut g_q) =
            (rs(Role::CodewordC1), rs(Role::CodewordC2), rs(Role::DitherC1), rs(Role::Quantizer));

        let p = &self.params;
        let s = &self.scheme;
        let (ll, lc) = (&self.lattice_l, &self.lattice_c);
        let sd_s1 = (interference_scale * p.q1).sqrt();
        let sd_s2 = (interference_scale * p.q2).sqrt();
        let sd_z = p.no.sqrt();
        let sd_r = s.theta_r.sqrt();
        let sd_q = s.delta.sqrt();
        let coop = s.theta_c > 0.0;
        let (al, ac) = (s.alpha_l, s.alpha_c);

        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let mut r = Round {
                s1: sd_s1 * g_s1.sample::<f64, _>(StandardNormal),
                s2: sd_s2 * g_s2.sample::<f64, _>(StandardNormal),
                z: sd_z * g_z.sample::<f64, _>(StandardNormal),
                x1r: sd_r * g_r.sample::<f64, _>(StandardNormal),
                v1l: ll.uniform_from_unit(u_v1l.random()),
                v2l: ll.uniform_from_unit(u_v2l.random()),
                d1l: ll.uniform_from_unit(u_d1l.random()),
                d2l: ll.uniform_from_unit(u_d2l.random()),
                ..Round::default()
            };

            if coop {
                r.v1c = lc.uniform_from_unit(u_v1c.random());
                r.v2c = lc.uniform_from_unit(u_v2c.random());
                r.d1c = lc.uniform_from_unit(u_d1c.random());
                r.zhat = sd_q * g_q.sample::<f64, _>(StandardNormal);
                // Tx2 precodes against s2 without a dither, then quantizes.
                r.x2c = lc.reduce(r.v2c - ac * r.s2);
                let x2c_hat = r.x2c + r.zhat;
                let s1c = r.s1 + r.x1r;
                r.x1c = lc.reduce(r.v1c + x2c_hat - ac * s1c - r.d1c);
            }

            let s1l = r.s1 + r.x1r + r.x1c;
            r.x1l = ll.reduce(r.v1l - al * s1l - r.d1l);
            r.x2l = ll.reduce(r.v2l - al * r.s2 - r.d2l);
            r.y = r.x1r + r.x1c + r.x1l + r.x2l + r.s1 + r.s2 + r.z;

            r.yl = ll.reduce(al * r.y + r.d1l + r.d2l);
            r.zeff_l = al * r.z - (1.0 - al) * (r.x1l + r.x2l);
            r.yl_direct = ll.reduce(r.v1l + r.v2l + r.zeff_l);

            if coop {
                let zc = r.x1l + r.x2l + r.z;
                r.yc = lc.reduce(ac * r.y + r.d1c);
                r.zeff_c = r.zhat + ac * zc - (1.0 - ac) * r.x1c;
                r.yc_direct = lc.reduce(r.v1c + r.v2c + r.zeff_c);
            }

            r.zr = r.x1c + r.x1l + r.x2l + r.s2 + r.z;
            out.push(r);
        }
        out
    }

    /// Runs `n` rounds and extracts one value per round, in round order.
    pub fn simulate<T, F>(&self, n: usize, seed: u64, label: &str, interference_scale: f64, extract: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&Round) -> T + Sync,
    {
        let streams = Substreams::new(seed, label);
        let blocks = n.div_ceil(BLOCK_LEN);
        let per_block: Vec<Vec<T>> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let len = BLOCK_LEN.min(n - b * BLOCK_LEN);
                self.block_rounds(&streams, b, len, interference_scale)
                    .iter()
                    .map(&extract)
                    .collect()
            })
            .collect();
        per_block.into_iter().flatten().collect()
    }
}

/// Distance between two points of the cell, modulo the lattice.
fn torus_distance(lat: &ScalarLattice, a: f64, b: f64) -> f64 {
    lat.reduce(a - b).abs()
}

/// One named statistical check of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn check_le(name: &str, value: f64, threshold: f64) -> Check {
    Check {
        name: name.to_string(),
        value,
        threshold,
        pass: value <= threshold,
    }
}

fn check_lt(name: &str, value: f64, threshold: f64) -> Check {
    Check {
        pass: value < threshold,
        ..check_le(name, value, threshold)
    }
}

/// Empirical statistics of one run next to their predicted values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub layer: Layer,
    pub n: usize,
    pub seed: u64,
    /// The layer carries no power; nothing was measured.
    pub empty: bool,
    pub cell_width: f64,
    pub measured_zeff_var: f64,
    pub predicted_zeff_var: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks_uniformity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks_interference_invariance: Option<f64>,
    pub max_identity_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_pairwise_correlation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_bookkeeping_residual: Option<f64>,
    pub p1: f64,
    pub p2: f64,
    pub tx1_power: f64,
    pub tx2_power: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_family: Option<NoiseFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mi_gaussian: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mi_alt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_ext::option")]
    pub rate_floor: Option<f64>,
}

impl SimReport {
    fn empty(layer: Layer, n: usize, seed: u64, p: &ChannelParams) -> Self {
        SimReport {
            layer,
            n,
            seed,
            empty: true,
            cell_width: 0.0,
            measured_zeff_var: 0.0,
            predicted_zeff_var: 0.0,
            ks_uniformity: None,
            ks_interference_invariance: None,
            max_identity_residual: 0.0,
            max_pairwise_correlation: None,
            rate_bookkeeping_residual: None,
            p1: p.p1,
            p2: p.p2,
            tx1_power: 0.0,
            tx2_power: 0.0,
            noise_family: None,
            mi_gaussian: None,
            mi_alt: None,
            rate_floor: None,
        }
    }

    pub fn relative_variance_error(&self) -> f64 {
        if self.predicted_zeff_var == 0.0 {
            return self.measured_zeff_var.abs();
        }
        (self.measured_zeff_var - self.predicted_zeff_var).abs() / self.predicted_zeff_var
    }

    /// All threshold checks that apply to this report.
    pub fn checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        if self.empty {
            return out;
        }
        if self.layer == Layer::Claim1 {
            if let (Some(g), Some(floor)) = (self.mi_gaussian, self.rate_floor) {
                out.push(check_le("mi_gaussian_abs_error", (g - floor).abs(), MI_TOL));
                if let Some(alt) = self.mi_alt {
                    out.push(check_le("mi_alt_deficit", g - alt, MI_TOL));
                }
            }
            return out;
        }
        if self.layer != Layer::R {
            out.push(check_le(
                "max_identity_residual",
                self.max_identity_residual,
                IDENTITY_TOL * self.cell_width,
            ));
        }
        out.push(check_le("zeff_var_rel_error", self.relative_variance_error(), VARIANCE_REL_TOL));
        if let Some(ks) = self.ks_uniformity {
            out.push(check_lt("ks_uniformity", ks, KS_UNIFORM_TOL));
        }
        if let Some(ks) = self.ks_interference_invariance {
            out.push(check_lt("ks_interference_invariance", ks, KS_INVARIANCE_TOL));
        }
        if let Some(c) = self.max_pairwise_correlation {
            out.push(check_lt("max_pairwise_correlation", c, 3.0 / (self.n as f64).sqrt()));
        }
        if let Some(r) = self.rate_bookkeeping_residual {
            out.push(check_le("rate_bookkeeping_residual", r, 1e-12));
        }
        out.push(check_le("tx1_power", self.tx1_power, self.p1 * (1.0 + POWER_REL_TOL)));
        out.push(check_le("tx2_power", self.tx2_power, self.p2 * (1.0 + POWER_REL_TOL)));
        out
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.pass)
    }
}

fn require_rounds(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n", "need at least one round"));
    }
    Ok(())
}

/// Predicted layer-L effective-noise variance.
pub fn predicted_zeff_l(p: &ChannelParams, s: &SchemeParams) -> f64 {
    let a = s.alpha_l;
    a * a * p.no + (1.0 - a) * (1.0 - a) * 2.0 * s.theta_l
}

/// Predicted layer-C effective-noise variance.
pub fn predicted_zeff_c(p: &ChannelParams, s: &SchemeParams) -> f64 {
    let a = s.alpha_c;
    s.delta + a * a * SchemeParams::layer_c_floor(p) + (1.0 - a) * (1.0 - a) * s.theta_c
}

/// Predicted variance of the noise aggregate seen by layer R.
pub fn predicted_zr(p: &ChannelParams, s: &SchemeParams) -> f64 {
    p.no + s.theta_c + 2.0 * p.p2 + p.q2
}

/// Layer L without cooperation.
pub fn run_layer_l(p: &ChannelParams, n: usize, seed: u64) -> Result<SimReport> {
    run_layer_l_with(p, &SchemeParams::no_cooperation(p), n, seed)
}

/// Layer L under an arbitrary scheme (layer C present when `thetaC > 0`).
pub fn run_layer_l_with(p: &ChannelParams, s: &SchemeParams, n: usize, seed: u64) -> Result<SimReport> {
    require_rounds(n)?;
    let model = LayeredModel::new(p, s)?;
    let lat = model.lattice_l;
    let half = 0.5 * lat.q;

    let rounds = model.simulate(n, seed, "layered", 1.0, |r| {
        (
            r.zeff_l,
            r.x1l,
            r.x2l,
            r.yl,
            torus_distance(&lat, r.yl, r.yl_direct),
            r.x1_total(),
        )
    });
    let scaled: Vec<f64> = model.simulate(n, seed, "layered", INTERFERENCE_SCALE, |r| r.yl);

    let zeff: Vec<f64> = rounds.iter().map(|t| t.0).collect();
    let x1l: Vec<f64> = rounds.iter().map(|t| t.1).collect();
    let x2l: Vec<f64> = rounds.iter().map(|t| t.2).collect();
    let yl: Vec<f64> = rounds.iter().map(|t| t.3).collect();
    let x1: Vec<f64> = rounds.iter().map(|t| t.5).collect();

    let ks_uniformity = if lat.q > 0.0 {
        stats::ks_uniform(&x1l, -half, half).max(stats::ks_uniform(&x2l, -half, half))
    } else {
        0.0
    };

    Ok(SimReport {
        empty: false,
        cell_width: lat.q,
        measured_zeff_var: stats::variance(&zeff),
        predicted_zeff_var: predicted_zeff_l(p, s),
        ks_uniformity: Some(ks_uniformity),
        ks_interference_invariance: Some(stats::ks_two_sample(&yl, &scaled)),
        max_identity_residual: rounds.iter().map(|t| t.4).fold(0.0, f64::max),
        tx1_power: stats::power(&x1),
        tx2_power: stats::power(&x2l),
        ..SimReport::empty(Layer::L, n, seed, p)
    })
}

/// Layer C: compression at Tx2, relaying by Tx1, and the layer-C receiver.
pub fn run_layer_c(p: &ChannelParams, s: &SchemeParams, n: usize, seed: u64) -> Result<SimReport> {
    require_rounds(n)?;
    if s.theta_c <= 0.0 {
        return Ok(SimReport::empty(Layer::C, n, seed, p));
    }
    let model = LayeredModel::new(p, s)?;
    let lat = model.lattice_c;
    let half = 0.5 * lat.q;

    let rounds = model.simulate(n, seed, "layered", 1.0, |r| {
        (
            r.zeff_c,
            r.x1c,
            torus_distance(&lat, r.yc, r.yc_direct),
            r.x1_total(),
            r.x2l,
        )
    });
    let zeff: Vec<f64> = rounds.iter().map(|t| t.0).collect();
    let x1c: Vec<f64> = rounds.iter().map(|t| t.1).collect();
    let x1: Vec<f64> = rounds.iter().map(|t| t.3).collect();
    let x2: Vec<f64> = rounds.iter().map(|t| t.4).collect();

    let bookkeeping = 0.5 * (1.0 + s.theta_c / s.delta).log2();

    Ok(SimReport {
        empty: false,
        cell_width: lat.q,
        measured_zeff_var: stats::variance(&zeff),
        predicted_zeff_var: predicted_zeff_c(p, s),
        ks_uniformity: Some(stats::ks_uniform(&x1c, -half, half)),
        max_identity_residual: rounds.iter().map(|t| t.2).fold(0.0, f64::max),
        rate_bookkeeping_residual: Some((bookkeeping - s.r21).abs()),
        tx1_power: stats::power(&x1),
        tx2_power: stats::power(&x2),
        ..SimReport::empty(Layer::C, n, seed, p)
    })
}

/// Layer R: variance and mutual decorrelation of the aggregate noise.
pub fn run_layer_r(p: &ChannelParams, s: &SchemeParams, n: usize, seed: u64) -> Result<SimReport> {
    require_rounds(n)?;
    let model = LayeredModel::new(p, s)?;
    let rounds = model.simulate(n, seed, "layered", 1.0, |r| {
        ([r.x1c, r.x1l, r.x2l, r.s2, r.z], r.zr, r.x1_total())
    });
    let zr: Vec<f64> = rounds.iter().map(|t| t.1).collect();
    let x1: Vec<f64> = rounds.iter().map(|t| t.2).collect();
    let parts: Vec<Vec<f64>> = (0..5).map(|k| rounds.iter().map(|t| t.0[k]).collect()).collect();
    let mut max_corr = 0.0f64;
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if let Some(c) = stats::correlation(&parts[i], &parts[j]) {
                max_corr = max_corr.max(c.abs());
            }
        }
    }
    Ok(SimReport {
        empty: false,
        measured_zeff_var: stats::variance(&zr),
        predicted_zeff_var: predicted_zr(p, s),
        max_pairwise_correlation: Some(max_corr),
        tx1_power: stats::power(&x1),
        tx2_power: stats::power(&parts[2]),
        ..SimReport::empty(Layer::R, n, seed, p)
    })
}

/// Result of the dirty-paper worst-case-noise check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Claim1Estimate {
    pub family: NoiseFamily,
    /// `I(U;Y) - I(U;S)` in bits.
    pub mi_estimate: f64,
    pub i_uy: f64,
    pub i_us: f64,
    /// `C(P / Nz)`.
    pub rate_floor: f64,
}

/// Estimates the Costa auxiliary rate `I(U;Y) - I(U;S)` with
/// `U = X + alpha S`, `alpha = P/(P+Nz)`, for a noise of the given family.
pub fn claim1_mi_check(
    power: f64,
    interference: f64,
    noise_var: f64,
    family: NoiseFamily,
    n: usize,
    seed: u64,
) -> Result<Claim1Estimate> {
    for (name, v) in [("P", power), ("Q", interference), ("Nz", noise_var)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Simulation(format!("{name} must be finite and > 0, got {v}")));
        }
    }
    if n < MI_MIN_SAMPLES {
        return Err(Error::invalid("n", format!("mutual-information check needs n >= {MI_MIN_SAMPLES}")));
    }
    let streams = Substreams::new(seed, "claim1");
    let alpha = power / (power + noise_var);
    let (sd_x, sd_s, sd_z) = (power.sqrt(), interference.sqrt(), noise_var.sqrt());

    let blocks = n.div_ceil(BLOCK_LEN);
    let samples: Vec<(f64, f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let len = BLOCK_LEN.min(n - b * BLOCK_LEN);
            let mut gx = streams.stream(Role::ClaimInput, b as u64);
            let mut gs = streams.stream(Role::ClaimState, b as u64);
            let mut gz = streams.stream(Role::ClaimNoise, b as u64);
            (0..len)
                .map(|_| {
                    let x = sd_x * gx.sample::<f64, _>(StandardNormal);
                    let s = sd_s * gs.sample::<f64, _>(StandardNormal);
                    let z = sd_z * family.sample(&mut gz);
                    (x + alpha * s, x + s + z, s)
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();

    let u: Vec<f64> = samples.iter().map(|t| t.0).collect();
    let y: Vec<f64> = samples.iter().map(|t| t.1).collect();
    let s: Vec<f64> = samples.iter().map(|t| t.2).collect();
    let bu = mi::equal_mass_bins(&u, MI_BINS);
    let i_uy = mi::mutual_information_binned(&bu, &mi::equal_mass_bins(&y, MI_BINS), MI_BINS);
    let i_us = mi::mutual_information_binned(&bu, &mi::equal_mass_bins(&s, MI_BINS), MI_BINS);

    Ok(Claim1Estimate {
        family,
        mi_estimate: i_uy - i_us,
        i_uy,
        i_us,
        rate_floor: c_unchecked(power / noise_var),
    })
}

/// Runs the Gaussian reference and, unless `alt` is Gaussian, the
/// alternative noise family with the same seed.
pub fn run_claim1(power: f64, interference: f64, noise_var: f64, alt: NoiseFamily, n: usize, seed: u64) -> Result<SimReport> {
    let g = claim1_mi_check(power, interference, noise_var, NoiseFamily::Gaussian, n, seed)?;
    let mi_alt = if alt == NoiseFamily::Gaussian {
        None
    } else {
        Some(claim1_mi_check(power, interference, noise_var, alt, n, seed)?.mi_estimate)
    };
    let p = ChannelParams::new(power, 0.0, interference, 0.0, noise_var, 0.0, 0.0)?;
    Ok(SimReport {
        empty: false,
        noise_family: Some(alt),
        mi_gaussian: Some(g.mi_estimate),
        mi_alt,
        rate_floor: Some(g.rate_floor),
        ..SimReport::empty(Layer::Claim1, n, seed, &p)
    })
}
