use thiserror::Error;

use crate::quiver::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rank {rank} for type {family}")]
    InvalidRank { family: char, rank: usize },

    #[error("cannot parse Dynkin type {0:?} (expected e.g. A2, D4, E8)")]
    ParseType(String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("vertex {0} is not a vertex of this quiver")]
    UnknownVertex(Vertex),

    #[error("unknown arrow id {0:?}")]
    UnknownArrow(String),

    #[error("quiver mismatch: {0}")]
    QuiverMismatch(String),

    #[error("face index {index} out of range 0..={rank}")]
    FaceOutOfRange { index: usize, rank: usize },

    #[error("subset J must be nonempty")]
    EmptyFace,

    #[error("not a relation in the face poset: {0}")]
    NotPosetRelation(String),

    #[error("dimension at the framing vertex must be 1, found {0}")]
    FramingDimension(usize),

    #[error("not a staircase: {0}")]
    NotStaircase(String),

    #[error("staircase is not of regular-representation type: weight profile {0:?}")]
    NotRegularType(Vec<usize>),

    #[error("operation only supported for type A, got {0}")]
    TypeANotSupported(String),

    #[error("corner module relations violated: {0}")]
    RelationsViolated(String),

    #[error("spectrum does not split over the rationals; characteristic polynomials {char_polys:?}")]
    NonSplitSpectrum { char_polys: Vec<Vec<String>> },

    #[error("rational root search exceeded its coefficient limit")]
    RootSearchLimit,

    #[error("constraint system is unbounded in variable v_{0}")]
    Unbounded(usize),

    #[error("constraint system is infeasible")]
    Infeasible,

    #[error("vertex v_{0} is not an unknown of this constraint system")]
    NotAnUnknown(usize),

    #[error("null-root system for {0} has no normalized positive integer solution")]
    NullRoot(String),

    #[error("malformed payload: {0}")]
    Payload(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
