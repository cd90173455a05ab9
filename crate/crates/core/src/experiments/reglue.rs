use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_positive, restrict_core, sample_instance, ExperimentError};
use crate::restriction::{complement_reglue, grow_simple_quad, restrict, Restriction, Scale};
use crate::rng::{replicate_rng, replicate_seed};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReglueConfig {
    pub n: usize,
    pub alpha: f64,
    pub eps: f64,
    pub replicates: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReglueRow {
    pub n: usize,
    pub alpha: f64,
    pub eps: f64,
    pub seed: u64,
    pub outcome: &'static str,
    pub reconstructed: Option<bool>,
    pub filler_area: Option<usize>,
    pub filler_perimeter: Option<usize>,
    pub same_restriction: Option<bool>,
    pub accepts_any_filler: Option<bool>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReglueSummary {
    pub trials: usize,
    pub cemetery: usize,
    pub reconstructed: usize,
    pub same_restriction: usize,
    /// Trials where the restriction is complete with a mark closer than
    /// `r` to the point.
    pub fragile: usize,
    pub fragile_failures: usize,
}

impl ReglueSummary {
    pub fn from_rows(rows: &[ReglueRow]) -> Self {
        let ok: Vec<&ReglueRow> = rows.iter().filter(|r| r.outcome == "ok").collect();
        let fragile: Vec<&&ReglueRow> = ok.iter().filter(|r| r.accepts_any_filler == Some(false)).collect();
        ReglueSummary {
            trials: ok.len(),
            cemetery: rows.len() - ok.len(),
            reconstructed: ok.iter().filter(|r| r.reconstructed == Some(true)).count(),
            same_restriction: ok.iter().filter(|r| r.same_restriction == Some(true)).count(),
            fragile: fragile.len(),
            fragile_failures: fragile.iter().filter(|r| r.same_restriction != Some(true)).count(),
        }
    }

    pub fn all_ok(&self) -> bool {
        self.reconstructed == self.trials && self.same_restriction == self.trials
    }
}

/// Perimeter range of fillers giving a map that still satisfies the
/// constraints of the restriction: `v+` beyond `p_n / 3` and perimeter at
/// least `p_n / 2`.
fn filler_perimeters(r: &Restriction) -> (usize, usize) {
    let s = &r.scale;
    let need_v_plus = (s.upper_cut() + 1 + r.p_in).saturating_sub(r.p_right);
    let need_half = (s.p_n.div_ceil(2) + r.p_in).saturating_sub(r.p_right + r.p_left);
    let mut lo = need_v_plus.max(need_half).max(r.p_in + 1).max(2);
    lo += lo % 2;
    let original = r.complement.boundary_walk().len();
    (lo, original.max(lo) + 8)
}

fn reglue_row(cfg: &ReglueConfig, index: usize) -> Result<ReglueRow, ExperimentError> {
    let seed = replicate_seed(cfg.seed, index as u64);
    let mut rng = replicate_rng(cfg.seed, index as u64);
    let scale = Scale::new(cfg.n, cfg.alpha, cfg.eps);
    let inst = sample_instance(cfg.n, 3 * scale.p_n, &mut rng)?;
    let mut row = ReglueRow {
        n: cfg.n,
        alpha: cfg.alpha,
        eps: cfg.eps,
        seed,
        outcome: "cemetery",
        reconstructed: None,
        filler_area: None,
        filler_perimeter: None,
        same_restriction: None,
        accepts_any_filler: None,
    };
    let outcome = restrict_core(&inst.core, scale)?;
    let (Some(r), Some(c)) = (outcome.restriction(), inst.core.core()) else {
        return Ok(row);
    };
    row.outcome = "ok";
    row.accepts_any_filler = Some(r.accepts_any_filler());
    let back = complement_reglue(r, &r.complement)?;
    row.reconstructed = Some(back.canonical_code() == c.quad.canonical_code());

    let (lo, hi) = filler_perimeters(r);
    let pf = lo + 2 * rng.random_range(0..=(hi - lo) / 2);
    let min_area = if pf == 2 { 0 } else { (pf / 2 - 1).max(1) };
    let area = min_area + rng.random_range(0..=cfg.n.min(200));
    let filler = grow_simple_quad(pf, area, &mut rng)?;
    let q2 = complement_reglue(r, &filler)?;
    row.filler_area = Some(area);
    row.filler_perimeter = Some(pf);
    let same = match restrict(&q2, scale)?.restriction() {
        Some(r2) => r2.key() == r.key() && (r2.p_right, r2.p_in, r2.p_left, r2.r) == (r.p_right, r.p_in, r.p_left, r.r),
        None => false,
    };
    row.same_restriction = Some(same);
    Ok(row)
}

/// Regluing the original complement and a random filler on the restriction
/// of the core of a map with `n` inner faces and perimeter `3 p_n`.
pub fn reglue_experiment(cfg: &ReglueConfig) -> Result<Vec<ReglueRow>, ExperimentError> {
    check_positive("alpha", cfg.alpha)?;
    if !(cfg.eps > 0.0 && cfg.eps < 1.0 / 3.0) || cfg.n == 0 || cfg.replicates == 0 {
        return Err(ExperimentError::Config("need 0 < eps < 1/3, n >= 1, replicates >= 1".into()));
    }
    (0..cfg.replicates).into_par_iter().map(|i| reglue_row(cfg, i)).collect()
}
