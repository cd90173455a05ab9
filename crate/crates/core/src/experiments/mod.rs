//! Monte Carlo drivers shared by the command line and the acceptance suite.
//! Replicate `i` of an experiment seeded with `seed` draws from
//! `replicate_rng(seed, i)`, so results do not depend on scheduling.

mod reglue;
mod tv;
mod validate;

pub use reglue::{reglue_experiment, ReglueConfig, ReglueRow, ReglueSummary};
pub use tv::{tv_experiment, TvConfig, TvRow};
pub use validate::{validate, ValidateConfig, ValidationReport};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bijection::{build_quadrangulation, BijectionError, EncodedQuad};
use crate::coredec::{core, CoreResult};
use crate::counting::{log_count_asymptotic, log_count_exact, perimeter_sequence};
use crate::encoder::{sample_treed_bridge, EncoderError, LabeledTreedBridge};
use crate::oracle::OracleError;
use crate::planemap::MapError;
use crate::restriction::{
    certificate_sets, check_bounds, is_good, restrict, BoundsReport, RestrictionError, RestrictionOutcome, Scale,
};
use crate::rng::{replicate_rng, replicate_seed};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Encoder(#[from] EncoderError),
    #[error(transparent)]
    Bijection(#[from] BijectionError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Restriction(#[from] RestrictionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A pointed map with general boundary, `n` inner faces and perimeter `p`,
/// with its encoding and core.
pub struct Instance {
    pub ltb: LabeledTreedBridge,
    pub enc: EncodedQuad,
    pub core: CoreResult,
}

pub fn sample_instance<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Result<Instance, ExperimentError> {
    let ltb = sample_treed_bridge(p, n, rng)?;
    let enc = build_quadrangulation(&ltb)?;
    let core = core(&enc.quad)?;
    Ok(Instance { ltb, enc, core })
}

/// Restriction of the core; the cemetery when the core is the cemetery or
/// too short for the scale.
pub fn restrict_core(core: &CoreResult, scale: Scale) -> Result<RestrictionOutcome, RestrictionError> {
    let Some(c) = core.core() else {
        return Ok(RestrictionOutcome::Cemetery);
    };
    match restrict(&c.quad, scale) {
        Err(RestrictionError::PreconditionViolated(_)) => Ok(RestrictionOutcome::Cemetery),
        other => other,
    }
}

fn check_positive(name: &str, x: f64) -> Result<(), ExperimentError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(ExperimentError::Config(format!("{name} must be positive, got {x}")))
    }
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
    (mean, (var / k).sqrt())
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CoreStatsRow {
    pub n: usize,
    pub alpha: f64,
    pub seed: u64,
    pub replicates: usize,
    pub frac_cemetery: f64,
    pub mean_area_ratio: f64,
    pub se_area_ratio: f64,
    pub mean_perim_ratio: f64,
    pub se_perim_ratio: f64,
}

/// Area over `n` and perimeter over `p_n` of the core of a map with `n`
/// inner faces and perimeter `3 p_n`; the cemetery counts as 0.
pub fn core_statistics(n: usize, alpha: f64, replicates: usize, seed: u64) -> Result<CoreStatsRow, ExperimentError> {
    check_positive("alpha", alpha)?;
    if n == 0 || replicates == 0 {
        return Err(ExperimentError::Config("n and replicates must be at least 1".into()));
    }
    let p_n = perimeter_sequence(n as u64, alpha) as usize;
    let ratios = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = replicate_rng(seed, i as u64);
            let inst = sample_instance(n, 3 * p_n, &mut rng)?;
            Ok((
                inst.core.area() as f64 / n as f64,
                inst.core.perimeter() as f64 / p_n as f64,
                inst.core.core().is_none(),
            ))
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    let area: Vec<f64> = ratios.iter().map(|r| r.0).collect();
    let perim: Vec<f64> = ratios.iter().map(|r| r.1).collect();
    let (mean_area_ratio, se_area_ratio) = mean_se(&area);
    let (mean_perim_ratio, se_perim_ratio) = mean_se(&perim);
    Ok(CoreStatsRow {
        n,
        alpha,
        seed,
        replicates,
        frac_cemetery: ratios.iter().filter(|r| r.2).count() as f64 / replicates as f64,
        mean_area_ratio,
        se_area_ratio,
        mean_perim_ratio,
        se_perim_ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictConfig {
    pub n: usize,
    pub alpha: f64,
    pub eps: f64,
    pub delta: f64,
    pub replicates: usize,
    pub seed: u64,
    /// Compute the distortion of the correspondence (quadratic in the map
    /// size).
    pub distortion: bool,
}

impl RestrictConfig {
    pub fn check(&self) -> Result<(), ExperimentError> {
        check_positive("alpha", self.alpha)?;
        if !(0.0 < self.delta && self.delta < self.eps && self.eps < 1.0 / 3.0) {
            return Err(ExperimentError::Config(format!(
                "need 0 < delta < eps < 1/3, got delta = {}, eps = {}",
                self.delta, self.eps
            )));
        }
        if self.n == 0 || self.replicates == 0 {
            return Err(ExperimentError::Config("n and replicates must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RestrictRow {
    pub n: usize,
    pub alpha: f64,
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
    pub outcome: &'static str,
    pub r: Option<u32>,
    pub p_right: Option<usize>,
    pub p_in: Option<usize>,
    pub p_left: Option<usize>,
    pub area_restriction: Option<usize>,
    pub good: Option<bool>,
    #[serde(rename = "S")]
    pub s: Option<usize>,
    #[serde(rename = "S_ge")]
    pub s_ge: Option<usize>,
    #[serde(rename = "S_eq")]
    pub s_eq: Option<usize>,
    #[serde(rename = "M_low")]
    pub m_low: Option<u32>,
    #[serde(rename = "M_high")]
    pub m_high: Option<u32>,
    pub bounds_ok: Option<bool>,
    #[serde(skip)]
    pub report: Option<BoundsReport>,
    /// Bounds recomputed with the tree rooted at `v+` added to `S`.
    #[serde(skip)]
    pub widened: Option<BoundsReport>,
}

fn restrict_row(cfg: &RestrictConfig, index: usize) -> Result<RestrictRow, ExperimentError> {
    let seed = replicate_seed(cfg.seed, index as u64);
    let mut rng = replicate_rng(cfg.seed, index as u64);
    let scale = Scale::new(cfg.n, cfg.alpha, cfg.eps);
    let inst = sample_instance(cfg.n, 3 * scale.p_n, &mut rng)?;
    let mut row = RestrictRow {
        n: cfg.n,
        alpha: cfg.alpha,
        eps: cfg.eps,
        delta: cfg.delta,
        seed,
        outcome: "cemetery",
        r: None,
        p_right: None,
        p_in: None,
        p_left: None,
        area_restriction: None,
        good: None,
        s: None,
        s_ge: None,
        s_eq: None,
        m_low: None,
        m_high: None,
        bounds_ok: None,
        report: None,
        widened: None,
    };
    let outcome = restrict_core(&inst.core, scale)?;
    let (Some(r), Some(c)) = (outcome.restriction(), inst.core.core()) else {
        return Ok(row);
    };
    let certs = certificate_sets(&inst.enc, &inst.ltb, c, r)?;
    let report = check_bounds(&inst.enc, c, r, &certs, cfg.distortion);
    if !report.all_ok() {
        let wider = certs.with_tree_at_v_plus(&inst.enc, &inst.ltb);
        row.widened = Some(check_bounds(&inst.enc, c, r, &wider, cfg.distortion));
    }
    row.outcome = "ok";
    row.r = Some(r.r);
    row.p_right = Some(r.p_right);
    row.p_in = Some(r.p_in);
    row.p_left = Some(r.p_left);
    row.area_restriction = Some(r.area());
    row.good = Some(is_good(&outcome, cfg.delta)?);
    row.s = Some(certs.s.len());
    row.s_ge = Some(certs.s_ge.len());
    row.s_eq = Some(certs.s_eq.len());
    row.m_low = certs.m_low;
    row.m_high = certs.m_high;
    row.bounds_ok = Some(report.all_ok());
    row.report = Some(report);
    Ok(row)
}

/// One row per replicate: restriction of the core of a map with `n` inner
/// faces and perimeter `3 p_n`, its goodness and the certificate bounds.
pub fn restrict_statistics(cfg: &RestrictConfig) -> Result<Vec<RestrictRow>, ExperimentError> {
    cfg.check()?;
    (0..cfg.replicates).into_par_iter().map(|i| restrict_row(cfg, i)).collect()
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AsymptoticRow {
    pub m: i64,
    pub ell: i64,
    pub log_exact: f64,
    pub log_asymptotic: f64,
    pub ratio_minus_one: f64,
}

/// Exact count against its asymptotic form, in log space.
pub fn asymptotic_rows(points: &[(i64, i64)]) -> Result<Vec<AsymptoticRow>, ExperimentError> {
    points
        .iter()
        .map(|&(m, ell)| {
            if m < 1 || ell < 1 || ell > m + 1 {
                return Err(ExperimentError::Config(format!("need 1 <= ell <= m + 1, got ({m}, {ell})")));
            }
            let e = log_count_exact(m, ell).0;
            let a = log_count_asymptotic(m, ell).0;
            Ok(AsymptoticRow { m, ell, log_exact: e, log_asymptotic: a, ratio_minus_one: (e - a).exp_m1() })
        })
        .collect()
}

/// `(m, floor(sqrt m))` for the given areas.
pub fn sqrt_scaling_points(areas: &[i64]) -> Vec<(i64, i64)> {
    areas.iter().map(|&m| (m, ((m as f64).sqrt().floor() as i64).max(1))).collect()
}
