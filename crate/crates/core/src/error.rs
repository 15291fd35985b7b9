//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the arithmetic and pairing machinery.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("division by zero (or by a value indistinguishable from zero at working precision)")]
    DivisionByZero,
    #[error("argument is not a p-adic unit")]
    NotAUnit,
    #[error("logarithm of zero requested")]
    ZeroArgument,
    #[error("series composition requires inner constant term zero")]
    NonComposable,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("element does not belong to the stated group")]
    WrongGroup,
    #[error("linear map is not a splitting of the stated sequence")]
    NotASplitting,
    #[error("partial law applied to elements over different bases")]
    BaseMismatch,
    #[error("trivialization pair violates its invariants: {0}")]
    InvalidTrivialization(String),
    #[error("complex map is not injective on points")]
    NotInjective,
    #[error("no lattice element aligns the two bases (broken precondition)")]
    NoAligningElement,
    #[error("log matrix of the lattice image is singular; no compatible splitting under this branch")]
    SingularLambda,
    #[error("splitting is not compatible with the lattice linearization")]
    NotCompatible,
    #[error("splitting data is not self-dual")]
    NotDual,
    #[error("zero component in a multiplicative coordinate")]
    ZeroComponent,
    #[error("point does not lie on the curve")]
    OffCurve,
    #[error("support clash while evaluating a function on a divisor")]
    SupportClash,
    #[error("divisor is not principal (degree or class sum nonzero)")]
    NotPrincipal,
    #[error("cycle supported outside the allowed locus")]
    WrongSupport,
    #[error("cycle has nonzero degree where degree zero is required")]
    NonzeroDegree,
    #[error("splitting context incompatible with the curve instance: {0}")]
    IncompatibleSplitting(String),
    #[error("sum formula violated at {0}")]
    SumFormulaViolated(String),
    #[error("missing local splitting at place {0}")]
    MissingLocalSplitting(String),
    #[error("could not certify an integral lift: {0}")]
    NoIntegralLift(String),
    #[error("bad place {0}: motive does not extend integrally and no splitting was supplied")]
    BadPlace(String),
    #[error("input does not validate: {0}")]
    SchemaError(String),
    #[error("biextension axiom violated: {0}")]
    BiextensionAxiom(String),
}

pub type Result<T> = std::result::Result<T, Error>;
