use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("variable index must be at least 1")]
    ZeroIndex,
    #[error("variable x{index} exceeds the declared variable count {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("tuple entries must be positive integers (entry {position} is {value})")]
    NonPositiveEntry { position: usize, value: String },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("line {line}: {message}")]
    SystemSyntax { line: usize, message: String },
    #[error("polynomial syntax error at byte {position}: {message}")]
    PolynomialSyntax { position: usize, message: String },
    #[error("variable x{0} does not occur in the polynomial (degree 0)")]
    MissingVariable(usize),
    #[error("the zero polynomial has no finite solution set")]
    ZeroPolynomial,
    #[error("{vars} variables is too many for the sign-pattern product (max {max})")]
    TooManyVariables { vars: usize, max: usize },
    #[error("system still contains unit atoms")]
    UnitAtomPresent,
    #[error("system uses atoms outside {{x_i + 1 = x_k, x_i * x_j = x_k}}")]
    NotConjectureForm,
    #[error("parameter {name}={value} is below the minimum {min}")]
    ParameterTooSmall { name: &'static str, value: usize, min: usize },
    #[error("parameter {name}={value} is above the maximum {max}")]
    ParameterTooLarge { name: &'static str, value: usize, max: usize },
    #[error("f({0}) has too many digits to materialize")]
    BoundTooLarge(usize),
    #[error("{0}")]
    Invalid(String),
}
