//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A line of an input file could not be parsed.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// The same external id was used on both sides of the bipartition.
    #[error("id `{0}` appears in both parts; the two node sets must be disjoint")]
    BipartiteViolation(String),
    #[error("graph is empty")]
    EmptyGraph,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// Negative sampling was asked for on a complete bipartite graph.
    #[error("graph has no absent cross-part pairs to sample")]
    NoNegatives,
    #[error("requested {requested} negative pairs but only {available} exist")]
    ExhaustedNegatives { requested: usize, available: usize },
    #[error("node {0} has no neighbors")]
    NoNeighbor(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    /// A same-part operation was handed a cross-part pair, or vice versa.
    #[error("nodes are not in the required parts")]
    PartMismatch,
    #[error("malformed sample record: {0}")]
    MalformedRecord(String),
    #[error("training diverged at epoch {epoch} (loss {loss})")]
    Diverged { epoch: usize, loss: f64 },
    /// Classifier training needs both classes present.
    #[error("training data contains a single class")]
    SingleClass,
    /// An evaluation task had nothing to score.
    #[error("empty task: {0}")]
    EmptyTask(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    /// Ranking metrics are undefined for a user with no relevant items.
    #[error("relevant set is empty")]
    NoRelevantItems,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
