use thiserror::Error;

/// Errors raised by the algebra engine, the relation checker and the fitter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis index {index} occurs more than once")]
    RepeatedIndex { index: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("operands live over different signatures ({left} vs {right})")]
    SignatureMismatch { left: String, right: String },
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("grade {grade} out of range for dimension {dim}")]
    GradeOutOfRange { grade: usize, dim: usize },
    #[error("series did not converge; last term norm {last_norm:e}")]
    SeriesNotConverged { last_norm: f64 },
    #[error("expected a grade-1 element")]
    NotAVector,
    #[error("deformation matrix is not antisymmetric (max |A + A^T| = {0:e})")]
    NotAntisymmetric(f64),
    #[error("deformation matrix has shape {rows}x{cols}, expected {dim}x{dim}")]
    BadDeformationShape {
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("indices ({plus}, {minus}) do not form a hyperbolic pair")]
    BadHyperbolicPair { plus: usize, minus: usize },
    #[error("deformation couples the hyperbolic pair to the rest of the space (A[{0}][{1}] != 0)")]
    CrossTermDeformation(usize, usize),
    #[error("point is mapped to infinity (|y ybar| = {0:e})")]
    PointAtInfinity(f64),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("Vahlen conditions violated: {0}")]
    ConditionsViolated(String),
    #[error("finite-difference residual {0:e} exceeds 1e-2; reduce the step")]
    StepTooLarge(f64),
    #[error("expected an element of {expected}, got signature {found}")]
    WrongSignature { expected: String, found: String },
    #[error("tensor operands use different product modes")]
    ModeMismatch,
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("missing parameter '{0}'")]
    MissingParameter(String),
    #[error("syntax error at byte {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("unknown function '{0}'")]
    UnknownFunction(String),
    #[error("unbound symbol '{0}'")]
    UnboundSymbol(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("bad deformation family: {0}")]
    BadFamily(String),
    #[error("invalid suite: {0}")]
    InvalidSuite(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
