//! Error taxonomy shared by every layer of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the library.
///
/// `Syntax`, `UndeclaredVariable`, `InexactDivision` and `DivisionByZero`
/// come out of the coefficient-expression parser; the rest are raised by
/// the algebra, specialization and decomposition layers. Each variant
/// carries enough context to locate the offending input.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),

    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("denominator does not invert under the morphism: {0}")]
    NonInvertibleDenominator(String),

    #[error("matrix is not square: {0}x{1}")]
    NonSquare(usize, usize),

    #[error("modules belong to different algebras: {0}")]
    AlgebraMismatch(String),

    #[error("coefficient field mismatch: {0}")]
    FieldMismatch(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("negative or non-integral multiplicity: {0}")]
    NegativeMultiplicity(String),

    #[error("assignment is not a unit: {0}")]
    NonUnitAssignment(String),

    #[error("target is not the fraction field of the image: {0}")]
    FractionFieldMismatch(String),

    #[error("no lattice found by diagonal rescaling: {0}")]
    LatticeNotFound(String),

    #[error("kernel of the first specialization is not contained in the second: {0}")]
    KernelNotNested(String),

    #[error("bridge morphism is not defined on the intermediate ring: {0}")]
    PhiNotDefinedOnB(String),

    #[error("unsupported field for this operation: {0}")]
    UnsupportedField(String),

    #[error("dimension {0} exceeds the configured bound {1}")]
    DimensionBound(usize, usize),

    #[error("algebra is not split: {0}")]
    NotSplit(String),

    #[error("module admits no grading compatible with the algebra: {0}")]
    NotGradable(String),

    #[error("independent oracle disagrees: {0}")]
    OracleMismatch(String),

    #[error("decomposition matrices do not compose: {0}")]
    FactorizationFailure(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("schema error: {0}")]
    SchemaError(String),

    #[error("validation failed: {0}")]
    ValidationError(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Prefixes the payload with a location, keeping the variant so
    /// callers can still match on the failure kind.
    pub fn context(self, ctx: &str) -> Error {
        use Error::*;
        let wrap = |m: String| format!("{ctx}: {m}");
        match self {
            Syntax(m) => Syntax(wrap(m)),
            UndeclaredVariable(m) => UndeclaredVariable(wrap(m)),
            InexactDivision(m) => InexactDivision(wrap(m)),
            DivisionByZero(m) => DivisionByZero(wrap(m)),
            NonInvertibleDenominator(m) => NonInvertibleDenominator(wrap(m)),
            NonSquare(r, c) => NonSquare(r, c),
            AlgebraMismatch(m) => AlgebraMismatch(wrap(m)),
            FieldMismatch(m) => FieldMismatch(wrap(m)),
            RingMismatch(m) => RingMismatch(wrap(m)),
            NoSolution(m) => NoSolution(wrap(m)),
            NegativeMultiplicity(m) => NegativeMultiplicity(wrap(m)),
            NonUnitAssignment(m) => NonUnitAssignment(wrap(m)),
            FractionFieldMismatch(m) => FractionFieldMismatch(wrap(m)),
            LatticeNotFound(m) => LatticeNotFound(wrap(m)),
            KernelNotNested(m) => KernelNotNested(wrap(m)),
            PhiNotDefinedOnB(m) => PhiNotDefinedOnB(wrap(m)),
            UnsupportedField(m) => UnsupportedField(wrap(m)),
            DimensionBound(d, b) => DimensionBound(d, b),
            NotSplit(m) => NotSplit(wrap(m)),
            NotGradable(m) => NotGradable(wrap(m)),
            OracleMismatch(m) => OracleMismatch(wrap(m)),
            FactorizationFailure(m) => FactorizationFailure(wrap(m)),
            UnknownFixture(m) => UnknownFixture(wrap(m)),
            SchemaError(m) => SchemaError(wrap(m)),
            ValidationError(m) => ValidationError(wrap(m)),
            Internal(m) => Internal(wrap(m)),
        }
    }
}
