use thiserror::Error;

use crate::census::CensusProgress;
use crate::level_tree::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid level tree: {0}")]
    InvalidTree(ValidationReport),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("vertex `{0}` is not a saddle")]
    NotASaddle(String),

    #[error("edge `{edge}` is not an outermost edge of saddle `{saddle}`")]
    InvalidWitness { saddle: String, edge: String },

    #[error("mark `{0}` carries no germ annotation")]
    AnnotationRequired(String),

    #[error("edge `{edge}` has no mark at index {index}")]
    NoSuchMark { edge: String, index: usize },

    #[error("{orientation} cannot be combined with {through_side} on edge `{edge}`")]
    InconsistentOrientation {
        edge: String,
        orientation: String,
        through_side: String,
    },

    #[error("partition {below}+{cap}+{keep} does not match the {marks} marks on edge `{edge}`")]
    PartitionMismatch {
        edge: String,
        below: usize,
        cap: usize,
        keep: usize,
        marks: usize,
    },

    #[error("split of edge `{0}` would create an unmarked outermost disk")]
    WouldCreateUnmarkedOutermostDisk(String),

    #[error("five-saddle pattern not found: {0}")]
    PatternNotFound(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("census resource cap exceeded after {} candidates", .0.nodes_examined)]
    ResourceCapExceeded(Box<CensusProgress>),

    #[error("knot table line {line}: {message}")]
    KnotTable { line: usize, message: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
