use alloc::string::String;
use thiserror::Error;

/// Errors raised by the arithmetic core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error("field of size {size} exceeds the table cap of {cap} elements")]
    FieldCap { size: u128, cap: u64 },
    #[error("work estimate {work} exceeds the configured cap {cap}")]
    WorkCap { work: u128, cap: u128 },
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    GroupCap { order: u128, cap: u64 },
    #[error("zero has no discrete logarithm")]
    ZeroLog,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("no positive weight system exists")]
    NoWeights,
    #[error("weight system does not satisfy the Calabi-Yau condition")]
    NotCalabiYau,
    #[error("no atomic decomposition: {0}")]
    NotAtomic(String),
    #[error("det A = {det} does not divide p - 1 = {p_minus_one}")]
    DetDoesNotDivide { det: u64, p_minus_one: u64 },
    #[error("weighted projective space is not supported (weights {0:?})")]
    Weighted(alloc::vec::Vec<u64>),
    #[error("dual weight systems differ")]
    DualWeightsDiffer,
    #[error("singular member of the family: {0}")]
    SingularMember(String),
    #[error("invalid hypergeometric parameters: {0}")]
    Parameters(String),
    #[error("q = {q} is not good: it shares a factor with denominator {denominator}")]
    NotGood { q: u64, denominator: u64 },
    #[error("q - 1 = {q_minus_one} is not divisible by denominator {denominator}")]
    Divisibility { q_minus_one: u64, denominator: u64 },
    #[error("parameters are not defined over Q")]
    NotDefinedOverQ,
    #[error("argument t must be nonzero")]
    ZeroArgument,
    #[error("rounding residual {residual:e} exceeds bound {bound:e}")]
    Residual { residual: f64, bound: f64 },
    #[error("division by zero modulo {0}")]
    ModularZeroDivision(u64),
    #[error("L-function is not a polynomial of the expected degree: {0}")]
    Polynomiality(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;
