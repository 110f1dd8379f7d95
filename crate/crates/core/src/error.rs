use thiserror::Error;

/// Errors produced by the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("empty family of dual vectors")]
    EmptyFamily,
    #[error("empty index set")]
    EmptyIndexSet,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("rays do not positively span the plane")]
    NotComplete,
    #[error("rays {0} and {1} are positively parallel")]
    ParallelRays(usize, usize),
    #[error("a complete surface fan needs at least 3 rays, got {0}")]
    TooFewRays(usize),
    #[error("cone {0} is not smooth")]
    SingularCone(usize),
    #[error("fan is not smooth (singular cones {0:?})")]
    NotSmooth(Vec<usize>),
    #[error("index {index} out of range (size {len})")]
    BadIndex { index: usize, len: usize },
    #[error("<R, rho> must equal 1, got {0}")]
    BadNormalization(String),
    #[error("{count} weights exceed the enumeration cap of {cap}")]
    TooManyWeights { count: usize, cap: usize },
    #[error("invalid splitting: {0}")]
    InvalidSplitting(String),
    #[error("at least two blow-up rays are required")]
    TooFewBlowups,
    #[error("blown-up fan does not refine the base fan")]
    NotARefinement,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("invalid weight system: {0}")]
    InvalidWeights(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
}

pub type Result<T> = std::result::Result<T, Error>;
