use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("subspace is degenerate for the hermitian form")]
    DegenerateSubspace,

    #[error("subspace is not contained in the enclosing subspace")]
    NotContained,

    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("invalid class signature: {0}")]
    InvalidSignature(String),

    #[error("signature does not fit backend: {0}")]
    SignatureDoesNotFit(String),

    #[error("operator is not in the class: {0}")]
    NotInClass(String),

    #[error("eigen-flags belong to different classes")]
    SignatureMismatch,

    #[error("invalid eigen-flag: {0}")]
    InvalidFlag(String),

    #[error("enumeration requires finite backend")]
    FiniteBackendRequired,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("matrix is not an isometry of the hermitian form")]
    NotIsometry,

    #[error("matrix is not invertible")]
    Singular,

    #[error("map is not a graph automorphism")]
    NotAutomorphism,

    #[error("image flag is not a vertex of the graph")]
    ImageNotInGraph,

    #[error("image subspace is degenerate; retry with a different semilinear map")]
    DegenerateImage,

    #[error("adjacency-type map is not well defined: {0}")]
    TauNotWellDefined(String),

    #[error("adjacency-type map is not induced by a permutation of the index set")]
    TauNotPermutationInduced,

    #[error("component map is not well defined: {0}")]
    ComponentMapNotWellDefined(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("no nondegenerate configuration found at stage {0}")]
    ChoiceExhausted(String),

    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("malformed json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
