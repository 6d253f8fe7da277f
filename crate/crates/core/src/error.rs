use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not a sublattice basis: {0}")]
    NotSublatticeBasis(String),

    #[error("cone is not in the fan: {0}")]
    ConeNotInFan(String),

    #[error("cokernel of beta is infinite (free rank {free_rank})")]
    InfiniteCokernel { free_rank: usize },

    #[error("fantastack precondition failed: {0}")]
    FantastackPrecondition(String),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),

    #[error("size guard exceeded: {0}")]
    TooLarge(String),

    #[error("invalid Hodge data: {0}")]
    InvalidHodge(String),

    #[error("matrix is not nilpotent: {0}")]
    NotNilpotent(String),

    #[error("exponential is not integral: {0}")]
    NonIntegralExponential(String),

    #[error("matrix is not invertible over the integers: {0}")]
    NotInvertible(String),

    #[error("not in the lattice span: {0}")]
    NotInSpan(String),

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
