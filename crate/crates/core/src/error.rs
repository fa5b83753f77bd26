use thiserror::Error;

/// Why a closed-form solver declined to produce an attractor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum NoAttractorReason {
    #[error("det(R) <= 0")]
    DetRNonPositive,
    #[error("discriminant D <= 0")]
    DiscriminantNonPositive,
    #[error("R is not positive definite")]
    RNotPositiveDefinite,
    #[error("pair lattice is not positive definite")]
    PairNotPositiveDefinite,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no attractor: {0}")]
    NoAttractor(NoAttractorReason),
    #[error("charge matrices P, Q must be symmetric")]
    AsymmetricCharge,
    #[error("input vectors are linearly dependent")]
    DependentVectors,
    #[error("Im(C1 * conj(C2)) = 0: coefficients are degenerate")]
    DegenerateCoefficients,
    #[error("lattice contexts do not match")]
    LatticeMismatch,
    #[error("matrix is not symmetric")]
    NonSymmetric,
    #[error("not Kahler rigid: {0}")]
    NotRigid(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
