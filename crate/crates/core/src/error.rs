use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("words are not reduced")]
    WordsNotReduced,
    #[error("words represent different elements")]
    DifferentElements,
    #[error("subset is not Bruhat-closed: {0}")]
    NotClosed(String),
    #[error("element is not maximal in the subset")]
    NotMaximal,
    #[error("subsequences have different endpoints")]
    EndpointMismatch,
    #[error("polynomial division failed: {0}")]
    DivisionFailure(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("no braid morphism exists for generators {0} and {1}")]
    NoBraidMorphism(String, String),
    #[error("coordinates do not lie in the Bott-Samelson lattice")]
    NotInLattice,
    #[error("{0} is not a reflection")]
    NotAReflection(String),
    #[error("basis check failed: {0}")]
    BasisFailure(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("triangularity failed: {0}")]
    TriangularityFailure(String),
    #[error("GKM condition violated by {0} and {1}")]
    GkmViolation(String, String),
    #[error("support is not contained in the given subset")]
    SupportOutsideI,
    #[error("subset is not stable under right multiplication by {0}")]
    NotStable(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
