use rayon::prelude::*;
use serde::Serialize;

use super::{check_positive, restrict_core, sample_instance, ExperimentError};
use crate::oracle::{sample_uniform_simple, tv_with_bootstrap};
use crate::planemap::CanonicalCode;
use crate::restriction::{restrict, RestrictionError, RestrictionOutcome, Scale};
use crate::rng::{replicate_rng, replicate_seed};

#[derive(Debug, Clone, PartialEq)]
pub struct TvConfig {
    pub sizes: Vec<usize>,
    pub alpha: f64,
    pub eps: f64,
    /// Samples on each side.
    pub replicates: usize,
    pub seed: u64,
    pub bootstrap: usize,
    pub max_tries: u64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TvRow {
    pub n: usize,
    pub p_n: usize,
    pub alpha: f64,
    pub eps: f64,
    pub seed: u64,
    pub samples: usize,
    pub tv: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub cemetery_uniform: f64,
    pub cemetery_core: f64,
    pub distinct_uniform: usize,
    pub distinct_core: usize,
}

type Key = Option<CanonicalCode>;

fn key(outcome: &RestrictionOutcome) -> Key {
    outcome.restriction().map(|r| r.key())
}

fn distinct(keys: &[Key]) -> usize {
    keys.iter().collect::<std::collections::HashSet<_>>().len()
}

/// Total variation between the restriction of a uniform pointed map with a
/// simple boundary of size `(n, p_n)` and the restriction of the core of a
/// map with `n` inner faces and perimeter `3 p_n`, at every size.
pub fn tv_experiment(cfg: &TvConfig) -> Result<Vec<TvRow>, ExperimentError> {
    check_positive("alpha", cfg.alpha)?;
    if !(cfg.eps > 0.0 && cfg.eps < 1.0 / 3.0) || cfg.replicates == 0 || cfg.sizes.is_empty() {
        return Err(ExperimentError::Config("need 0 < eps < 1/3, replicates >= 1 and sizes".into()));
    }
    cfg.sizes
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let seed = replicate_seed(cfg.seed, k as u64);
            let scale = Scale::new(n, cfg.alpha, cfg.eps);
            let uniform = (0..cfg.replicates)
                .into_par_iter()
                .map(|i| {
                    let mut rng = replicate_rng(seed, 2 * i as u64);
                    let q = sample_uniform_simple(n, scale.p_n, cfg.max_tries, &mut rng)?;
                    match restrict(&q, scale) {
                        Ok(o) => Ok(key(&o)),
                        Err(RestrictionError::PreconditionViolated(_)) => Ok(None),
                        Err(e) => Err(e.into()),
                    }
                })
                .collect::<Result<Vec<Key>, ExperimentError>>()?;
            let cored = (0..cfg.replicates)
                .into_par_iter()
                .map(|i| {
                    let mut rng = replicate_rng(seed, 2 * i as u64 + 1);
                    let inst = sample_instance(n, 3 * scale.p_n, &mut rng)?;
                    Ok(key(&restrict_core(&inst.core, scale)?))
                })
                .collect::<Result<Vec<Key>, ExperimentError>>()?;
            let mut rng = replicate_rng(seed, u64::MAX);
            let est = tv_with_bootstrap(&uniform, &cored, cfg.bootstrap, 0.95, &mut rng)?;
            let cem = |v: &[Key]| v.iter().filter(|k| k.is_none()).count() as f64 / v.len() as f64;
            Ok(TvRow {
                n,
                p_n: scale.p_n,
                alpha: cfg.alpha,
                eps: cfg.eps,
                seed,
                samples: cfg.replicates,
                tv: est.estimate,
                ci_low: est.lo,
                ci_high: est.hi,
                cemetery_uniform: cem(&uniform),
                cemetery_core: cem(&cored),
                distinct_uniform: distinct(&uniform),
                distinct_core: distinct(&cored),
            })
        })
        .collect()
}
