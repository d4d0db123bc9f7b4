use thiserror::Error;

/// Every failure the library can report.
///
/// Variants carry enough context to produce a useful message; the CLI maps
/// them onto exit code 3 ("domain error").
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at input {0}")]
    PoleAtInput(String),
    #[error("argument {0} lies on the branch cut (-inf, 0]")]
    BranchCutViolation(String),
    #[error("unsupported domain pair: {0}")]
    UnsupportedPair(String),
    #[error("point {0} lies outside the domain")]
    OutsideDomain(String),
    #[error("denominator vanishes numerically: {0}")]
    ZeroDenominator(String),
    #[error("modulus must be strictly positive: {0}")]
    NonPositiveModulus(String),
    #[error("logarithmic integral does not converge: {0}")]
    DivergentLogIntegral(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("unsupported support for this operation: {0}")]
    UnsupportedSupport(String),
    #[error("measure has support on the negative axis: {0}")]
    NegativeSupport(String),
    #[error("transform does not converge: {0}")]
    DivergentTransform(String),
    #[error("argument {0} is a pole at an integer")]
    PoleAtInteger(String),
    #[error("argument {0} is a pole on the lattice")]
    PoleOnLattice(String),
    #[error("input is not symmetric under reflection: {0}")]
    AsymmetricInput(String),
    #[error("measure carries mass at zero: {0}")]
    AtomAtZero(String),
    #[error("reflection relation violated: {0}")]
    ReflectionViolation(String),
    #[error("sample outside the positive cone: {0}")]
    SampleOutsidePositiveCone(String),
    #[error("quadrature tolerance not reached: {0}")]
    ToleranceNotReached(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Formats a complex number for error messages.
pub(crate) fn fmt_c(z: num_complex::Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}
