use thiserror::Error;

use crate::frac::Frac;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid fraction `{0}`")]
pub struct ParseFracError(pub String);

/// Errors raised by the pair calculus, the divisor bookkeeping and the driver.
///
/// Most variants signal a broken internal invariant rather than bad input:
/// the theory guarantees integrality and ordering, so a violation is a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pairs are not totally ordered at index {index}")]
    OrderViolation { index: usize },
    #[error("negative exponent in pair {index}")]
    NegativeExponent { index: usize },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("inversion needed with {pairs} characteristic pairs; only a single pair (0, b) or (a, 0) is supported")]
    UnsupportedInversion { pairs: usize },
    #[error("multiplicity {0} is not an integer")]
    NonIntegralMultiplicity(Frac),
    #[error("transformed degree {0} is not a positive integer")]
    NonIntegralDegree(Frac),
    #[error("move {mv} is not legal for first pair ({lambda}, {mu})")]
    IllegalMove { mv: &'static str, lambda: Frac, mu: Frac },
    #[error("pair {index} became integral")]
    DeepIntegralPair { index: usize },
    #[error("history does not cover divisor born in year {birth}")]
    IncompleteHistory { birth: u32 },
    #[error("inconsistent divisor configuration: {0}")]
    InconsistentConfiguration(String),
    #[error("invariant requested for a non-transversal state")]
    NotTransversal,
    #[error("coefficient collection is outside the monomial setting: {0}")]
    ConfigurationOutOfScope(String),
    #[error("state is already resolved")]
    AlreadyResolved,
    #[error("chart {chart} is not relevant for center {center}")]
    IrrelevantChart { center: String, chart: String },
    #[error("step cap {cap} exceeded along path {path}")]
    StepCapExceeded { cap: usize, path: String },
    #[error("binomial z^{m} + x^{a} y^{b} is reducible")]
    ReducibleBinomial { m: u32, a: u32, b: u32 },
    #[error("center {center} is not permissible for z^{m} + x^{a} y^{b}")]
    IllegalCenter { center: String, m: u32, a: u32, b: u32 },
    #[error("oracle divergence at {path}: {field}")]
    Divergence { path: String, field: String },
    #[error("general configuration violated at year {year}: {detail}")]
    NotGeneralConfiguration { year: u32, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
