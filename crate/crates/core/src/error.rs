use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("mutation direction is not orthogonal to its exponent (psi(u) = {0})")]
    PsiUNotOrthogonal(i64),
    #[error("zero input has no valuation")]
    ZeroInput,
    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishes,
    #[error("seed is not skew-symmetrizable")]
    NotSkew,
    #[error("index {0} is frozen")]
    FrozenIndex(usize),
    #[error("unknown index {0}")]
    InvalidIndex(usize),
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("function is not regular on the base chart")]
    NotRegularOnU0,
    #[error("{0} is not in the image of pbar1")]
    NotInImage(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("exact completion supports at most two unfrozen indices (got {0})")]
    UnsupportedRank(usize),
    #[error("path crosses the joint")]
    ThroughJoint,
    #[error("endpoint lies on a wall")]
    EndpointOnWall,
    #[error("crossing is not transverse")]
    NonTransverse,
    #[error("theta function is only known up to truncation")]
    TruncatedOnly,
    #[error("inconsistent scattering data at order {0}")]
    Inconsistent(u32),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
