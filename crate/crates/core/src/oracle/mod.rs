//! Brute-force ground truth at tiny sizes: every labeled treed bridge of a
//! given shape, the maps they encode, goodness-of-fit and total variation
//! estimates.

mod stats;

pub use stats::{chi_square, chi_square_uniformity, empirical_tv, tv_with_bootstrap, ChiSquare, TvEstimate};

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::bijection::{build_quadrangulation, BijectionError};
use crate::counting::binomial;
use crate::encoder::{
    count_plane_forests, forest_from_word, sample_treed_bridge, AttachedTree, DiscreteBridge, EncoderError,
    LabeledTree, LabeledTreedBridge, PlaneTree,
};
use crate::planemap::{CanonicalCode, PointedBoundaryQuad};

pub const MAX_UNIVERSE: u64 = 10_000_000;
const CACHE_HEADER: &str = "UNIVERSE v1";

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("universe of {size} treed bridges exceeds {MAX_UNIVERSE}")]
    UniverseTooLarge { size: String },
    #[error("sample code not in the universe: {0}")]
    UnknownCode(String),
    #[error("empty sample")]
    EmptySample,
    #[error("no simple-boundary map after {0} tries")]
    RejectionExhausted(u64),
    #[error(transparent)]
    Encoder(#[from] EncoderError),
    #[error(transparent)]
    Bijection(#[from] BijectionError),
    #[error("cache {path}: {msg}")]
    Cache { path: PathBuf, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// All `±1` bridges of length `p`, steps ordered `-1 < +1`.
pub fn enumerate_bridges(p: usize) -> Result<Vec<DiscreteBridge>, EncoderError> {
    if p < 2 || p % 2 == 1 {
        return Err(EncoderError::InvalidPerimeter(p));
    }
    fn go(steps: &mut Vec<i64>, ups: usize, downs: usize, out: &mut Vec<DiscreteBridge>) {
        if ups == 0 && downs == 0 {
            out.push(DiscreteBridge::from_steps(steps).expect("balanced steps"));
            return;
        }
        for (s, left) in [(-1, downs), (1, ups)] {
            if left > 0 {
                steps.push(s);
                let (u, d) = if s > 0 { (ups - 1, downs) } else { (ups, downs - 1) };
                go(steps, u, d, out);
                steps.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(p), p / 2, p / 2, &mut out);
    Ok(out)
}

/// All plane forests with `f` trees and `m` edges, by Łukasiewicz word in
/// increasing lexicographic order.
pub fn enumerate_forests(f: usize, m: usize) -> Vec<Vec<PlaneTree>> {
    assert!(f >= 1, "a forest has at least one tree");
    fn go(word: &mut Vec<u32>, len: usize, left: usize, level: i64, f: i64, out: &mut Vec<Vec<PlaneTree>>) {
        if word.len() == len {
            if left == 0 && level == -f {
                out.push(forest_from_word(word).expect("valid word"));
            }
            return;
        }
        let last = word.len() + 1 == len;
        for d in 0..=left {
            let next = level + d as i64 - 1;
            if (!last && next <= -f) || (last && next != -f) {
                continue;
            }
            word.push(d as u32);
            go(word, len, left - d, next, f, out);
            word.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(m + f), m + f, m, 0, f as i64, &mut out);
    out
}

/// Every labeling of `forest` with the given root labels, edge increments
/// read as base-3 digits.
pub fn enumerate_labelings(forest: &[PlaneTree], roots: &[i64]) -> Vec<Vec<LabeledTree>> {
    assert_eq!(forest.len(), roots.len());
    let parents: Vec<Vec<Option<usize>>> = forest.iter().map(|t| t.parents()).collect();
    let edges: usize = forest.iter().map(|t| t.edge_count()).sum();
    let total = 3usize.pow(edges as u32);
    (0..total)
        .map(|mut counter| {
            forest
                .iter()
                .zip(&parents)
                .zip(roots)
                .map(|((shape, par), &root)| {
                    let mut labels = Vec::with_capacity(par.len());
                    labels.push(root);
                    for p in par.iter().skip(1) {
                        let inc = (counter % 3) as i64 - 1;
                        counter /= 3;
                        labels.push(labels[p.expect("non-root")] + inc);
                    }
                    LabeledTree::new_unchecked(shape.clone(), labels)
                })
                .collect()
        })
        .collect()
}

/// `C(p, p/2) * #forests(p/2, m) * 3^m`.
pub fn universe_size(p: usize, m: usize) -> num_bigint::BigUint {
    binomial(p, p / 2) * count_plane_forests(p / 2, m).0 * num_bigint::BigUint::from(3u32).pow(m as u32)
}

fn checked_universe(p: usize, m: usize) -> Result<u64, OracleError> {
    let size = universe_size(p, m);
    match u64::try_from(&size) {
        Ok(s) if s <= MAX_UNIVERSE => Ok(s),
        _ => Err(OracleError::UniverseTooLarge { size: size.to_string() }),
    }
}

fn attach(bridge: &DiscreteBridge, trees: Vec<LabeledTree>) -> LabeledTreedBridge {
    let downs = bridge.downsteps();
    LabeledTreedBridge::from_parts_unchecked(
        bridge.clone(),
        downs.into_iter().zip(trees).map(|(at, tree)| AttachedTree { at, tree }).collect(),
    )
}

/// Every labeled treed bridge with perimeter `p` and `m` edges.
pub fn enumerate_treed_bridges(p: usize, m: usize) -> Result<Vec<LabeledTreedBridge>, OracleError> {
    checked_universe(p, m)?;
    let forests = enumerate_forests(p / 2, m);
    let mut out = Vec::new();
    for bridge in enumerate_bridges(p)? {
        let roots: Vec<i64> = bridge.downsteps().iter().map(|&i| bridge.labels()[i]).collect();
        for forest in &forests {
            for trees in enumerate_labelings(forest, &roots) {
                out.push(attach(&bridge, trees));
            }
        }
    }
    Ok(out)
}

/// Boundary quadrangulations of a given size, read off the full universe of
/// labeled treed bridges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniverseTable {
    pub n: usize,
    pub p: usize,
    pub simple: bool,
    /// Number of treed bridges enumerated.
    pub universe: u64,
    /// Rooted codes, sorted.
    pub codes: Vec<CanonicalCode>,
    /// Number of pointed maps over each rooted code.
    pub multiplicities: Vec<u64>,
    /// Pointed codes, sorted.
    pub pointed: Vec<CanonicalCode>,
}

impl UniverseTable {
    pub fn rooted_count(&self) -> usize {
        self.codes.len()
    }

    pub fn pointed_count(&self) -> u64 {
        self.multiplicities.iter().sum()
    }

    pub fn contains(&self, code: &CanonicalCode) -> bool {
        let list = if code.as_slice().last() == Some(&u32::MAX) { &self.codes } else { &self.pointed };
        list.binary_search(code).is_ok()
    }

    pub fn cache_name(n: usize, p: usize, simple: bool) -> String {
        format!("universe-n{n}-p{p}-{}-v1.txt", if simple { "simple" } else { "all" })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{CACHE_HEADER}\nn {} p {} simple {} universe {}\n",
            self.n, self.p, self.simple as u8, self.universe
        );
        for (c, m) in self.codes.iter().zip(&self.multiplicities) {
            s.push_str(&format!("R {} {m}\n", c.to_text()));
        }
        for c in &self.pointed {
            s.push_str(&format!("P {}\n", c.to_text()));
        }
        s
    }

    pub fn from_text(text: &str) -> Option<UniverseTable> {
        let mut lines = text.lines();
        if lines.next()? != CACHE_HEADER {
            return None;
        }
        let head: Vec<&str> = lines.next()?.split_whitespace().collect();
        if head.len() != 8 || head[0] != "n" || head[2] != "p" || head[4] != "simple" || head[6] != "universe" {
            return None;
        }
        let mut t = UniverseTable {
            n: head[1].parse().ok()?,
            p: head[3].parse().ok()?,
            simple: head[5] == "1",
            universe: head[7].parse().ok()?,
            codes: Vec::new(),
            multiplicities: Vec::new(),
            pointed: Vec::new(),
        };
        for line in lines {
            let mut parts = line.split_whitespace();
            match parts.next()? {
                "R" => {
                    t.codes.push(CanonicalCode::from_text(parts.next()?)?);
                    t.multiplicities.push(parts.next()?.parse().ok()?);
                }
                "P" => t.pointed.push(CanonicalCode::from_text(parts.next()?)?),
                _ => return None,
            }
        }
        Some(t)
    }

    pub fn save(&self, path: &Path) -> Result<(), OracleError> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<UniverseTable, OracleError> {
        let text = fs::read_to_string(path)?;
        UniverseTable::from_text(&text)
            .ok_or_else(|| OracleError::Cache { path: path.to_path_buf(), msg: "malformed universe table".into() })
    }
}

/// Builds every map with `n` inner faces and perimeter `p`, optionally
/// keeping only those with a simple boundary.
pub fn enumerate_boundary_quads(n: usize, p: usize, simple_only: bool) -> Result<UniverseTable, OracleError> {
    let universe = checked_universe(p, n)?;
    let forests = enumerate_forests(p / 2, n);
    let shards = enumerate_bridges(p)?
        .into_par_iter()
        .map(|bridge| {
            let roots: Vec<i64> = bridge.downsteps().iter().map(|&i| bridge.labels()[i]).collect();
            let mut codes = Vec::new();
            for forest in &forests {
                for trees in enumerate_labelings(forest, &roots) {
                    let enc = build_quadrangulation(&attach(&bridge, trees))?;
                    if !simple_only || enc.quad.boundary_walk().simple {
                        codes.push(enc.quad.canonical_code());
                    }
                }
            }
            Ok(codes)
        })
        .collect::<Result<Vec<Vec<CanonicalCode>>, OracleError>>()?;
    let mut pointed: Vec<CanonicalCode> = shards.into_iter().flatten().collect();
    pointed.sort_unstable();
    pointed.dedup();
    let mut rooted: BTreeMap<CanonicalCode, u64> = BTreeMap::new();
    for c in &pointed {
        *rooted.entry(c.unpointed()).or_default() += 1;
    }
    let (codes, multiplicities) = rooted.into_iter().unzip();
    Ok(UniverseTable { n, p, simple: simple_only, universe, codes, multiplicities, pointed })
}

/// Same as [`enumerate_boundary_quads`], reading and writing a text table in
/// `dir`.
pub fn enumerate_boundary_quads_cached(
    n: usize,
    p: usize,
    simple_only: bool,
    dir: &Path,
) -> Result<UniverseTable, OracleError> {
    let path = dir.join(UniverseTable::cache_name(n, p, simple_only));
    if path.exists() {
        if let Ok(t) = UniverseTable::load(&path) {
            if (t.n, t.p, t.simple) == (n, p, simple_only) {
                return Ok(t);
            }
        }
    }
    let t = enumerate_boundary_quads(n, p, simple_only)?;
    fs::create_dir_all(dir)?;
    t.save(&path)?;
    Ok(t)
}

/// Uniform pointed quadrangulation with a simple boundary, `n` inner faces
/// and perimeter `p`, by rejection from the bijection. Forgetting the point
/// gives a uniform rooted map since every such map has `n + p/2 + 1`
/// vertices.
pub fn sample_uniform_simple<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    max_tries: u64,
    rng: &mut R,
) -> Result<PointedBoundaryQuad, OracleError> {
    for _ in 0..max_tries {
        let enc = build_quadrangulation(&sample_treed_bridge(p, n, rng)?)?;
        if enc.quad.boundary_walk().simple {
            return Ok(enc.quad);
        }
    }
    Err(OracleError::RejectionExhausted(max_tries))
}

#[cfg(test)]
mod tests;
