use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("zero has no factorization")]
    ZeroNotFactorable,
    #[error("could not factor {0}")]
    FactorizationFailed(String),
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("empty coefficient list")]
    EmptyCoefficients,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("invalid sphere dimension {0}")]
    InvalidDimension(u128),
    #[error("invalid degree {0}")]
    InvalidDegree(u64),
    #[error("{0} is a perfect square")]
    SquareDiscriminant(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown theorem tag `{0}`")]
    UnknownTag(String),
    #[error("undecided: {0}")]
    Undecided(String),
}
