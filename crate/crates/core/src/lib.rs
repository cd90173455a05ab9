//! Uniform generation, exact counting and structural analysis of
//! quadrangulations with a boundary.

pub mod bijection;
pub mod coredec;
pub mod counting;
pub mod encoder;
pub mod experiments;
pub mod oracle;
pub mod planemap;
pub mod restriction;
pub mod rng;

pub use bijection::{build_quadrangulation, EncodedQuad};
pub use coredec::{core, decompose, CoreResult};
pub use counting::BigCount;
pub use encoder::LabeledTreedBridge;
pub use planemap::{CanonicalCode, PlaneMap, PointedBoundaryQuad};
pub use restriction::{restrict, restrict_reversed, RestrictionOutcome, Scale};
