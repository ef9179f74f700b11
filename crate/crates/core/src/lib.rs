//! Bipartite graph embedding toolkit.
//!
//! Builds node embeddings for bipartite graphs with two sibling methods:
//! FOBE fits binary direct and shared-neighbor observations with sigmoid
//! estimators, while HOBE fits relaxation-weighted observations up to three
//! hops with ReLU estimators. Pre-trained embeddings can be distilled into a
//! joint table by a combination network (plain or auto-regularized), and the
//! results are scored with link-prediction and top-k recommendation
//! harnesses.

pub mod algdist;
pub mod error;
pub mod graph;
pub mod rng;
pub mod sample;
pub mod split;

pub use error::{Error, Result};
pub use graph::{BipartiteGraph, KhopMode, NodeId, Part};
