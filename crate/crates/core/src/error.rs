use thiserror::Error;

/// Errors raised by the workbench.
///
/// Variants split into two families: input errors (malformed or
/// non-generic input that the caller can fix) and engine errors (an
/// internal consistency check failed). [`Error::is_input_error`] tells
/// them apart; the CLI maps them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is out of range (need 2 <= p < 2^62)")]
    ModulusOutOfRange(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("cannot evaluate at [0:0]")]
    EvaluationAtOrigin,
    #[error("denominator {0} is not invertible in the target field")]
    NonInvertible(String),
    #[error("generators incomplete by degree bound {0}")]
    BoundExceeded(usize),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("no valid curve after {0} draws")]
    RetriesExhausted(usize),
    #[error("target lies on the tangent line at the point")]
    TangentTarget,
    #[error("jet conditions need r = 3, got r = {0}")]
    UnsupportedRank(usize),
    #[error("duplicate node or condition point")]
    DuplicateNode,
    #[error("splitting degree {computed} disagrees with bookkeeping degree {expected}")]
    DegreeSumMismatch { computed: i64, expected: i64 },
    #[error("(d, g) = ({0}, {1}) is outside the Brill-Noether range")]
    NotBrillNoether(i64, i64),
    #[error("no reduction move applies at ({0}, {1})")]
    PlanningFailure(i64, i64),
    #[error("inconsistent datum: {0}")]
    InconsistentDatum(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Variant name, stable across releases; used in machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::ModulusOutOfRange(_) => "ModulusOutOfRange",
            Error::FieldMismatch(..) => "FieldMismatch",
            Error::DegreeMismatch(..) => "DegreeMismatch",
            Error::EvaluationAtOrigin => "EvaluationAtOrigin",
            Error::NonInvertible(_) => "NonInvertible",
            Error::BoundExceeded(_) => "BoundExceeded",
            Error::InvalidCurve(_) => "InvalidCurve",
            Error::DegenerateCurve(_) => "DegenerateCurve",
            Error::RetriesExhausted(_) => "RetriesExhausted",
            Error::TangentTarget => "TangentTarget",
            Error::UnsupportedRank(_) => "UnsupportedRank",
            Error::DuplicateNode => "DuplicateNode",
            Error::DegreeSumMismatch { .. } => "DegreeSumMismatch",
            Error::NotBrillNoether(..) => "NotBrillNoether",
            Error::PlanningFailure(..) => "PlanningFailure",
            Error::InconsistentDatum(_) => "InconsistentDatum",
            Error::Precondition(_) => "Precondition",
            Error::Parse(_) => "Parse",
            Error::Invariant(_) => "Invariant",
        }
    }

    /// True for errors caused by the input rather than by the engine.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::BoundExceeded(_)
                | Error::DegenerateCurve(_)
                | Error::RetriesExhausted(_)
                | Error::DegreeSumMismatch { .. }
                | Error::PlanningFailure(..)
                | Error::Invariant(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
