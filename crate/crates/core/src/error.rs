use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("invalid rank {rank} for {kind}")]
    InvalidRank { kind: &'static str, rank: usize },
    #[error("operation requires a finite type")]
    NotFinite,
    #[error("operation requires an affine type")]
    NotAffine,
    #[error("generation of an affine crystal requires a depth bound")]
    DepthRequired,
    #[error("weight coefficient must be nonnegative")]
    NegativeCoefficient,
    #[error("weight must be nonzero")]
    ZeroWeight,
    #[error("weight is not a level-one fundamental weight of D_n^(1)")]
    NotLevelOne,
    #[error("root element must satisfy eps_i = 0 for all i")]
    NotHighestWeight,
    #[error("graphs built over different Cartan data")]
    SpecMismatch,
    #[error("stack at ({0},{1}) is empty")]
    EmptyStack(usize, usize),
    #[error("column {0} out of range")]
    ColumnOutOfRange(usize),
    #[error("column {0} is empty")]
    EmptyColumn(usize),
    #[error("illegal tableau entry: {0}")]
    IllegalEntry(String),
    #[error("dimension mismatch between representation and framing")]
    DimensionMismatch,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("malformed payload: {0}")]
    Payload(String),
    #[error("non-exact division in character recursion")]
    InexactDivision,
}

pub type Result<T> = std::result::Result<T, Error>;
