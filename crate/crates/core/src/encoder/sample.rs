use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{DiscreteBridge, EncoderError, LabeledTree, LabeledTreedBridge, PlaneTree};
use crate::counting::{binomial, BigCount};

pub fn sample_bridge<R: Rng + ?Sized>(p: usize, rng: &mut R) -> Result<DiscreteBridge, EncoderError> {
    if p < 2 || p % 2 != 0 {
        return Err(EncoderError::InvalidPerimeter(p));
    }
    let mut steps: Vec<i64> = (0..p).map(|i| if i < p / 2 { 1 } else { -1 }).collect();
    steps.shuffle(rng);
    DiscreteBridge::from_steps(&steps)
}

/// `f / (2m + f) * C(2m + f, m)`.
pub fn count_plane_forests(f: usize, m: usize) -> BigCount {
    assert!(f >= 1, "a forest has at least one tree");
    let c = binomial(2 * m + f, m) * BigUint::from(f);
    let d = BigUint::from(2 * m + f);
    debug_assert!((&c % &d) == BigUint::from(0u32));
    BigCount(c / d)
}

/// Splits a Łukasiewicz word (child counts in preorder) into trees.
pub fn forest_from_word(degrees: &[u32]) -> Result<Vec<PlaneTree>, EncoderError> {
    let mut trees = Vec::new();
    let mut start = 0;
    let mut need: i64 = 0;
    for (i, &d) in degrees.iter().enumerate() {
        if need == 0 {
            start = i;
            need = 1;
        }
        need += d as i64 - 1;
        if need == 0 {
            trees.push(PlaneTree::from_degrees(degrees[start..=i].to_vec())?);
        }
    }
    if need != 0 {
        return Err(EncoderError::InvalidTree("word does not close its last tree".into()));
    }
    Ok(trees)
}

/// Uniform plane forest with `f` trees and `m` edges.
///
/// A uniform arrangement of `m` up-steps and `m + f` down-steps has exactly
/// `f` cyclic shifts that first reach `-f` at the last step: the shifts
/// starting at the first hitting times of the levels `min, ..., min + f - 1`.
/// Picking one of them uniformly gives a uniform forest code.
pub fn sample_plane_forest<R: Rng + ?Sized>(f: usize, m: usize, rng: &mut R) -> Vec<PlaneTree> {
    assert!(f >= 1, "a forest has at least one tree");
    let len = 2 * m + f;
    let mut steps: Vec<i8> = (0..len).map(|i| if i < m { 1 } else { -1 }).collect();
    steps.shuffle(rng);

    let mut first_hit = Vec::with_capacity(m + f + 1);
    let mut s: i64 = 0;
    let mut min: i64 = 0;
    for (t, &x) in steps.iter().enumerate() {
        s += x as i64;
        if s < min {
            min = s;
            first_hit.push(t + 1);
        }
    }
    // first_hit[k] is the first time level -(k + 1) is reached.
    let lowest = first_hit.len();
    let level = rng.random_range(0..f);
    let shift = first_hit[lowest - 1 - level] % len;

    let mut degrees = Vec::with_capacity(m + f);
    let mut ups = 0u32;
    for i in 0..len {
        if steps[(shift + i) % len] > 0 {
            ups += 1;
        } else {
            degrees.push(ups);
            ups = 0;
        }
    }
    let trees = forest_from_word(&degrees).expect("rotated word is a forest code");
    debug_assert_eq!(trees.len(), f);
    trees
}

/// Each edge gets an independent uniform increment in `{-1, 0, 1}`.
pub fn sample_labels<R: Rng + ?Sized>(forest: Vec<PlaneTree>, root_labels: &[i64], rng: &mut R) -> Vec<LabeledTree> {
    assert_eq!(forest.len(), root_labels.len());
    forest
        .into_iter()
        .zip(root_labels)
        .map(|(shape, &root)| {
            let parents = shape.parents();
            let mut labels = Vec::with_capacity(parents.len());
            labels.push(root);
            for p in parents.into_iter().skip(1) {
                let p = p.expect("non-root vertices have parents");
                labels.push(labels[p] + rng.random_range(-1..=1));
            }
            LabeledTree::new_unchecked(shape, labels)
        })
        .collect()
}

pub fn sample_treed_bridge<R: Rng + ?Sized>(
    p: usize,
    m: usize,
    rng: &mut R,
) -> Result<LabeledTreedBridge, EncoderError> {
    let bridge = sample_bridge(p, rng)?;
    let forest = sample_plane_forest(p / 2, m, rng);
    let roots: Vec<i64> = bridge.downsteps().into_iter().map(|i| bridge.labels()[i]).collect();
    let trees = sample_labels(forest, &roots, rng);
    let downs = bridge.downsteps();
    Ok(LabeledTreedBridge::from_parts_unchecked(
        bridge,
        downs.into_iter().zip(trees).map(|(at, tree)| super::AttachedTree { at, tree }).collect(),
    ))
}
