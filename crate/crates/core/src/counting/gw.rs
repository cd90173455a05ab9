use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::CountingError;
use crate::rng::replicate_rng;

/// `1 - f(x)` for the generating function of the number of first vertices
/// at label `r` in a critical geometric GW tree with uniform `{-1, 0, 1}`
/// label increments rooted at label `r + gap`.
fn tail(gap: i64, x: f64) -> f64 {
    if x == 1.0 {
        return 0.0;
    }
    let a = (-1.0 + (1.0 + 8.0 / (1.0 - x)).sqrt()) / 2.0;
    let g = gap as f64;
    2.0 / ((g + a) * (g + 1.0 + a))
}

pub fn gw_generating_function(gap: i64, x: f64) -> Result<f64, CountingError> {
    if gap < 0 {
        return Err(CountingError::DomainError(format!("gap {gap} is negative")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(CountingError::DomainError(format!("x = {x} outside [0, 1]")));
    }
    Ok(1.0 - tail(gap, x))
}

/// Left derivative at 1 from difference quotients `(f(1) - f(1 - h)) / h`
/// for `h` from `h_max` down to `h_min` in ratio 2, extrapolated in powers
/// of `sqrt(h)`.
pub fn gw_derivative_at_one(gap: i64, h_max: f64, h_min: f64) -> Result<f64, CountingError> {
    if gap < 0 {
        return Err(CountingError::DomainError(format!("gap {gap} is negative")));
    }
    let t = std::f64::consts::SQRT_2;
    let mut prev: Vec<f64> = Vec::new();
    let mut h = h_max;
    while h >= h_min {
        let mut row = vec![tail(gap, 1.0 - h) / h];
        for j in 1..=prev.len() {
            let w = t.powi(j as i32);
            let v = (w * row[j - 1] - prev[j - 1]) / (w - 1.0);
            row.push(v);
        }
        prev = row;
        h /= 2.0;
    }
    prev.last().copied().ok_or_else(|| CountingError::DomainError("empty step range".into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct GwSummary {
    pub gap: i64,
    pub replicates: u64,
    pub discarded: u64,
    pub mean: f64,
    pub se: f64,
    pub zero_fraction: f64,
    pub zero_se: f64,
}

impl GwSummary {
    pub fn discard_rate(&self) -> f64 {
        self.discarded as f64 / self.replicates as f64
    }
}

/// Count of first vertices at label 0 in one tree rooted at label `gap`,
/// or `None` when more than `cap` vertices are explored.
fn first_passage_count<R: Rng + ?Sized>(gap: i64, cap: u64, rng: &mut R) -> Option<u64> {
    let mut stack = vec![gap];
    let mut explored = 0u64;
    let mut count = 0u64;
    while let Some(label) = stack.pop() {
        explored += 1;
        if explored > cap {
            return None;
        }
        if label == 0 {
            count += 1;
            continue;
        }
        // Geometric(1/2) offspring: number of leading 1 bits.
        let mut kids = 0;
        loop {
            let bits = rng.next_u64();
            let ones = bits.trailing_ones();
            kids += ones;
            if ones < 64 {
                break;
            }
        }
        for _ in 0..kids {
            stack.push(label + rng.random_range(-1..=1));
        }
    }
    Some(count)
}

/// Per-replicate counts, `None` for discarded trees.
pub fn gw_first_passage_counts(gap: i64, replicates: u64, seed: u64, cap: u64) -> Vec<Option<u64>> {
    (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = replicate_rng(seed, i);
            first_passage_count(gap, cap, &mut rng)
        })
        .collect()
}

pub fn gw_first_passage_simulation(gap: i64, replicates: u64, seed: u64, cap: u64) -> GwSummary {
    let results = gw_first_passage_counts(gap, replicates, seed, cap);
    let kept: Vec<f64> = results.iter().flatten().map(|&c| c as f64).collect();
    let discarded = replicates - kept.len() as u64;
    let k = kept.len() as f64;
    let mean = kept.iter().sum::<f64>() / k;
    let var = kept.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
    let zeros = kept.iter().filter(|&&x| x == 0.0).count() as f64 / k;
    GwSummary {
        gap,
        replicates,
        discarded,
        mean,
        se: (var / k).sqrt(),
        zero_fraction: zeros,
        zero_se: (zeros * (1.0 - zeros) / k).sqrt(),
    }
}
