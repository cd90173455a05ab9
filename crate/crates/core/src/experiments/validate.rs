use rayon::prelude::*;
use serde::Serialize;

use super::ExperimentError;
use crate::bijection::{build_quadrangulation, verify_label_distance};
use crate::coredec::{core, decompose};
use crate::encoder::{sample_treed_bridge, LabeledTreedBridge};
use crate::planemap::PlaneMap;
use crate::rng::replicate_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateConfig {
    pub n: usize,
    pub p: usize,
    pub replicates: usize,
    pub seed: u64,
}

/// Number of replicates failing each check.
#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct ValidationReport {
    pub n: usize,
    pub p: usize,
    pub seed: u64,
    pub replicates: usize,
    pub invalid_bridge: usize,
    pub label_distance: usize,
    pub shape: usize,
    pub euler: usize,
    pub decomposition: usize,
    pub core_shape: usize,
    pub text_round_trip: usize,
}

impl ValidationReport {
    pub fn failures(&self) -> usize {
        self.invalid_bridge
            + self.label_distance
            + self.shape
            + self.euler
            + self.decomposition
            + self.core_shape
            + self.text_round_trip
    }

    pub fn is_ok(&self) -> bool {
        self.failures() == 0
    }
}

#[derive(Default)]
struct Flags([bool; 7]);

fn check_one(cfg: &ValidateConfig, i: usize) -> Result<Flags, ExperimentError> {
    let mut rng = replicate_rng(cfg.seed, i as u64);
    let ltb = sample_treed_bridge(cfg.p, cfg.n, &mut rng)?;
    let mut f = Flags::default();
    f.0[0] = !ltb.validate().is_ok();
    let enc = build_quadrangulation(&ltb)?;
    let q = &enc.quad;
    f.0[1] = !verify_label_distance(&enc);
    f.0[2] = q.map().quadrangulation_shape().ok() != Some((cfg.n, cfg.p));
    f.0[3] = q.map().euler_characteristic() != 2;
    let d = decompose(q)?;
    f.0[4] = d.total_area() != q.area() || d.total_perimeter() != q.perimeter();
    if let Some(c) = core(q)?.core() {
        f.0[5] = c.quad.map().quadrangulation_shape().ok() != Some((c.quad.area(), c.quad.perimeter()));
    }
    let ltb_back = LabeledTreedBridge::from_text(&ltb.to_text()).ok();
    let map_back = PlaneMap::from_text(&q.map().to_text()).ok().map(|m| m.to_text());
    f.0[6] = ltb_back.as_ref() != Some(&ltb) || map_back != Some(q.map().to_text());
    Ok(f)
}

/// Encoder, bijection and core invariants on `replicates` uniform treed
/// bridges with perimeter `p` and `n` tree edges.
pub fn validate(cfg: &ValidateConfig) -> Result<ValidationReport, ExperimentError> {
    if cfg.p == 0 || cfg.p % 2 == 1 || cfg.replicates == 0 {
        return Err(ExperimentError::Config("p must be even and positive, replicates >= 1".into()));
    }
    let flags = (0..cfg.replicates)
        .into_par_iter()
        .map(|i| check_one(cfg, i))
        .collect::<Result<Vec<Flags>, ExperimentError>>()?;
    let count = |k: usize| flags.iter().filter(|f| f.0[k]).count();
    Ok(ValidationReport {
        n: cfg.n,
        p: cfg.p,
        seed: cfg.seed,
        replicates: cfg.replicates,
        invalid_bridge: count(0),
        label_distance: count(1),
        shape: count(2),
        euler: count(3),
        decomposition: count(4),
        core_shape: count(5),
        text_round_trip: count(6),
    })
}
