use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("budget exceeded after {steps} steps ({what})")]
    BudgetExceeded { what: &'static str, steps: usize },
    #[error("generator `{0}` is not adjointable (order-reduce first)")]
    NotAdjointable(String),
    #[error("candidate is not a lift: L P L - L does not vanish")]
    NotALift,
    #[error("reducer is not declared invertible")]
    NotInvertible,
    #[error("outside the constant-coefficient subalgebra: {0}")]
    OutsideSubalgebra(String),
    #[error("symbol vanishes on the real axis (min |L| = {0:e})")]
    SymbolSingular(f64),
    #[error("degenerate Wronskian |W(0)| = {0:e}")]
    DegenerateWronskian(f64),
    #[error("quadrature did not converge: Richardson disagreement {disagreement:e} > {tol:e}")]
    QuadratureNotConverged { disagreement: f64, tol: f64 },
    #[error("generator `{0}` has no numeric realization")]
    UnrealizedGenerator(String),
    #[error("invalid generator declaration `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
