use crate::mode_dist::{CompositeKind, SpinLabel};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("every entry of the mode distribution is zero")]
    AllZero,
    #[error("mode distribution must have at least one mode per particle")]
    EmptyShape,
    #[error("entry count {found} does not match the declared shape ({expected} entries)")]
    EntryCount { expected: usize, found: usize },
    #[error("mode distribution contains a non-finite entry")]
    NonFinite,
    #[error("mode distribution is not normalized: sum |f|^2 = {0}")]
    NotNormalized(f64),
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("invalid Gaussian parameters: {0}")]
    InvalidGaussian(&'static str),
    #[error("grid too coarse: discretization defect {defect:e} exceeds {limit:e}")]
    GridTooCoarse { defect: f64, limit: f64 },
    #[error("numerical failure: {0}")]
    NumericalError(&'static str),
    #[error("Fock space dimension {dim} exceeds the configured limit {limit}")]
    DimensionOverflow { dim: u128, limit: usize },
    #[error("invalid Fock space configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("mode index {index} out of range (family has {len} modes)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("spin label {0:?} is not represented in this Fock space")]
    SpinNotInSpace(SpinLabel),
    #[error("operators or states belong to different Fock spaces")]
    SpaceMismatch,
    #[error("state vector has zero norm")]
    ZeroState,
    #[error("operation is not defined for composite kind {0:?}")]
    UnsupportedKind(CompositeKind),
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("the two identical fermions must carry the same spin label")]
    SpinMismatch,
    #[error("analytic value {analytic} disagrees with the Fock-space oracle value {oracle}")]
    OracleMismatch { analytic: f64, oracle: f64 },
}
