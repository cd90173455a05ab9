//! Labeled treed bridges: a discrete bridge of length `p` with a labeled
//! plane tree hanging from every downstep.

mod io;
mod sample;
mod tree;

pub use sample::{
    count_plane_forests, forest_from_word, sample_bridge, sample_labels, sample_plane_forest, sample_treed_bridge,
};
pub use tree::{LabeledTree, PlaneTree};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncoderError {
    #[error("perimeter must be even and at least 2, got {0}")]
    InvalidPerimeter(usize),
    #[error("invalid bridge: {0}")]
    InvalidBridge(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid treed bridge: {0}")]
    InvalidTreedBridge(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Integer path `λ(ρ_0), ..., λ(ρ_p)` with ±1 steps from 0 back to 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscreteBridge {
    labels: Vec<i64>,
}

impl DiscreteBridge {
    pub fn new(labels: Vec<i64>) -> Result<Self, EncoderError> {
        let p = labels.len().saturating_sub(1);
        if p < 2 || p % 2 != 0 {
            return Err(EncoderError::InvalidPerimeter(p));
        }
        if labels[0] != 0 || labels[p] != 0 {
            return Err(EncoderError::InvalidBridge("endpoints must be 0".into()));
        }
        if let Some(i) = labels.windows(2).position(|w| (w[1] - w[0]).abs() != 1) {
            return Err(EncoderError::InvalidBridge(format!("step {i} is not ±1")));
        }
        Ok(DiscreteBridge { labels })
    }

    pub fn from_steps(steps: &[i64]) -> Result<Self, EncoderError> {
        let mut labels = Vec::with_capacity(steps.len() + 1);
        labels.push(0);
        for s in steps {
            labels.push(labels.last().unwrap() + s);
        }
        Self::new(labels)
    }

    pub fn perimeter(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn is_downstep(&self, i: usize) -> bool {
        self.labels[i + 1] == self.labels[i] - 1
    }

    pub fn downsteps(&self) -> Vec<usize> {
        (0..self.perimeter()).filter(|&i| self.is_downstep(i)).collect()
    }
}

/// A labeled tree attached at position `at` of the bridge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AttachedTree {
    pub at: usize,
    pub tree: LabeledTree,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledTreedBridge {
    bridge: DiscreteBridge,
    trees: Vec<AttachedTree>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Validation {
    pub reasons: Vec<String>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.reasons.is_empty()
    }
}

impl LabeledTreedBridge {
    /// Attaches `trees` to the downsteps of `bridge`, in order.
    pub fn new(bridge: DiscreteBridge, trees: Vec<LabeledTree>) -> Result<Self, EncoderError> {
        let downs = bridge.downsteps();
        if downs.len() != trees.len() {
            return Err(EncoderError::InvalidTreedBridge(format!(
                "{} trees for {} downsteps",
                trees.len(),
                downs.len()
            )));
        }
        let trees = downs.into_iter().zip(trees).map(|(at, tree)| AttachedTree { at, tree }).collect();
        let ltb = LabeledTreedBridge { bridge, trees };
        let v = ltb.validate();
        if v.is_ok() {
            Ok(ltb)
        } else {
            Err(EncoderError::InvalidTreedBridge(v.reasons.join("; ")))
        }
    }

    /// No checks; pair with [`LabeledTreedBridge::validate`].
    pub fn from_parts_unchecked(bridge: DiscreteBridge, trees: Vec<AttachedTree>) -> Self {
        LabeledTreedBridge { bridge, trees }
    }

    pub fn bridge(&self) -> &DiscreteBridge {
        &self.bridge
    }

    pub fn perimeter(&self) -> usize {
        self.bridge.perimeter()
    }

    /// Trees sorted by attachment position.
    pub fn trees(&self) -> &[AttachedTree] {
        &self.trees
    }

    pub fn edge_count(&self) -> usize {
        self.trees.iter().map(|t| t.tree.shape().edge_count()).sum()
    }

    pub fn validate(&self) -> Validation {
        let mut reasons = Vec::new();
        let labels = self.bridge.labels();
        let p = labels.len().saturating_sub(1);
        if p < 2 || p % 2 != 0 {
            reasons.push(format!("perimeter {p} is not even and positive"));
        } else {
            if labels[0] != 0 || labels[p] != 0 {
                reasons.push("bridge endpoints are not 0".into());
            }
            if labels.windows(2).any(|w| (w[1] - w[0]).abs() != 1) {
                reasons.push("bridge has a step other than ±1".into());
            }
        }
        let downs: Vec<usize> = (0..p).filter(|&i| labels[i + 1] == labels[i] - 1).collect();
        if downs.len() * 2 != p {
            reasons.push(format!("{} downsteps for perimeter {p}", downs.len()));
        }
        let at: Vec<usize> = self.trees.iter().map(|t| t.at).collect();
        if at != downs {
            reasons.push(format!("trees attached at {at:?}, downsteps are {downs:?}"));
        }
        for t in &self.trees {
            if t.at < p && t.tree.root_label() != labels[t.at] {
                reasons.push(format!(
                    "tree at {} has root label {} but the bridge label is {}",
                    t.at,
                    t.tree.root_label(),
                    labels[t.at]
                ));
            }
            if let Err(e) = t.tree.check() {
                reasons.push(format!("tree at {}: {e}", t.at));
            }
        }
        Validation { reasons }
    }

    /// Total number of tree vertices.
    pub fn vertex_count(&self) -> usize {
        self.trees.iter().map(|t| t.tree.shape().vertex_count()).sum()
    }
}
