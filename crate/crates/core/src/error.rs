use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field Q(sqrt(-{0})) is not norm-Euclidean")]
    NonEuclideanField(i64),
    #[error("determinants differ: {0} vs {1}")]
    DeterminantMismatch(i64, i64),
    #[error("pair is not primitive")]
    NotPrimitive,
    #[error("form is not in the support set")]
    NotInSupport,
    #[error("operands use different parameters")]
    ParameterMismatch,
    #[error("lattice is not contained in the base order")]
    NotSubLattice,
    #[error("ideal has no proper O_K-basis")]
    NoProperBasis,
    #[error("ideals have different right orders")]
    IncompatibleOrders,
    #[error("norm {0} shares a factor with the bad primes")]
    BadNorm(u64),
    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("Hecke matrices do not commute")]
    NonCommuting,
    #[error("eigenform vanishes at the identity class")]
    VanishingAtIdentity,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
