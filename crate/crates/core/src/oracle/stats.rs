use std::collections::HashMap;
use std::hash::Hash;

use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{OracleError, UniverseTable};
use crate::planemap::CanonicalCode;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson test of `samples` against the law on `support` proportional to
/// `weights`, uniform when `weights` is `None`.
pub fn chi_square<K: Hash + Eq + std::fmt::Debug>(
    samples: &[K],
    support: &[K],
    weights: Option<&[f64]>,
) -> Result<ChiSquare, OracleError> {
    if samples.is_empty() || support.is_empty() {
        return Err(OracleError::EmptySample);
    }
    let index: HashMap<&K, usize> = support.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut observed = vec![0u64; support.len()];
    for s in samples {
        let i = index.get(s).ok_or_else(|| OracleError::UnknownCode(format!("{s:?}")))?;
        observed[*i] += 1;
    }
    let total_w: f64 = weights.map_or(support.len() as f64, |w| w.iter().sum());
    let n = samples.len() as f64;
    let statistic = observed
        .iter()
        .enumerate()
        .map(|(i, &o)| {
            let e = n * weights.map_or(1.0, |w| w[i]) / total_w;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let dof = support.len() - 1;
    let p_value = if dof == 0 { 1.0 } else { ChiSquared::new(dof as f64).expect("positive dof").sf(statistic) };
    Ok(ChiSquare { statistic, dof, p_value })
}

/// Pointed samples are tested against the uniform law on pointed maps,
/// rooted ones against the uniform law on rooted maps.
pub fn chi_square_uniformity(samples: &[CanonicalCode], universe: &UniverseTable) -> Result<ChiSquare, OracleError> {
    let pointed = samples.first().is_some_and(|c| c.as_slice().last() != Some(&u32::MAX));
    if pointed {
        chi_square(samples, &universe.pointed, None)
    } else {
        chi_square(samples, &universe.codes, None)
    }
}

fn frequencies<K: Hash + Eq>(s: &[K]) -> HashMap<&K, f64> {
    let mut f = HashMap::new();
    for k in s {
        *f.entry(k).or_insert(0.0) += 1.0;
    }
    let n = s.len() as f64;
    f.values_mut().for_each(|v| *v /= n);
    f
}

/// Half the `l1` distance between the empirical laws of `a` and `b`.
pub fn empirical_tv<K: Hash + Eq>(a: &[K], b: &[K]) -> Result<f64, OracleError> {
    if a.is_empty() || b.is_empty() {
        return Err(OracleError::EmptySample);
    }
    let (fa, fb) = (frequencies(a), frequencies(b));
    let mut sum: f64 = fa.iter().map(|(k, &x)| (x - fb.get(k).copied().unwrap_or(0.0)).abs()).sum();
    sum += fb.iter().filter(|(k, _)| !fa.contains_key(*k)).map(|(_, &y)| y).sum::<f64>();
    Ok((sum / 2.0).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvEstimate {
    pub estimate: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Plug-in estimate with a percentile bootstrap interval of level `level`.
pub fn tv_with_bootstrap<K: Hash + Eq + Clone, R: Rng + ?Sized>(
    a: &[K],
    b: &[K],
    resamples: usize,
    level: f64,
    rng: &mut R,
) -> Result<TvEstimate, OracleError> {
    let estimate = empirical_tv(a, b)?;
    let mut stats: Vec<f64> = (0..resamples)
        .map(|_| {
            let ra: Vec<K> = (0..a.len()).map(|_| a[rng.random_range(0..a.len())].clone()).collect();
            let rb: Vec<K> = (0..b.len()).map(|_| b[rng.random_range(0..b.len())].clone()).collect();
            empirical_tv(&ra, &rb).expect("nonempty resamples")
        })
        .collect();
    if stats.is_empty() {
        return Ok(TvEstimate { estimate, lo: estimate, hi: estimate });
    }
    stats.sort_by(|x, y| x.total_cmp(y));
    let q = |t: f64| stats[((t * (stats.len() - 1) as f64).round() as usize).min(stats.len() - 1)];
    let tail = (1.0 - level) / 2.0;
    Ok(TvEstimate { estimate, lo: q(tail), hi: q(1.0 - tail) })
}
