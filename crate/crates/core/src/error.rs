use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed coefficient `{0}`")]
    Coefficient(String),
    #[error("malformed monomial `{0}`")]
    Monomial(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("malformed angle `{0}`")]
    Angle(String),
}

/// Failures of the exact polynomial layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands live over different variable tables")]
    VarTableMismatch,
    #[error("exact division failed: {0}")]
    NonDivisible(String),
    #[error("binding for `{0}` is not invertible but the variable occurs with a negative exponent")]
    NonInvertibleBinding(String),
    #[error("divided difference points are not pairwise distinct")]
    DuplicatePoint,
    #[error("polynomial has a negative exponent in `{0}`")]
    NegativeExponent(String),
    #[error("variable `{0}` is not declared in the target table")]
    UnknownVariable(String),
    #[error("variable table does not declare {0} pair variables")]
    MissingPairs(usize),
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("identity check failed: {0}")]
    IdentityViolation(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrigError {
    #[error("critical point list is empty")]
    Empty,
    #[error("critical angles must be distinct (duplicate at index {0})")]
    DuplicateAngle(usize),
    #[error("multiplicity must be positive (index {0})")]
    ZeroMultiplicity(usize),
    #[error("angle {0} is outside [0, 2pi)")]
    AngleOutOfRange(f64),
    #[error("angle {0}pi has no exact Gaussian-rational e^(i theta)")]
    NonRepresentable(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpucError {
    #[error("|alpha_{index}| = {modulus} is not inside the unit disk")]
    OutsideDisk { index: usize, modulus: f64 },
    #[error("truncation size {n} must exceed the degree {d} of H")]
    DegreeTooLarge { d: usize, n: usize },
    #[error("truncation size must be positive")]
    EmptyTruncation,
    #[error("quadrature grid of {0} points is below the minimum 1024")]
    GridTooSmall(usize),
}

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Opuc(#[from] OpucError),
    #[error(transparent)]
    Trig(#[from] TrigError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("schedule must be strictly increasing and positive")]
    BadSchedule,
    #[error("schedule maximum {0} exceeds the configured limit {1}")]
    ScheduleTooLong(usize, usize),
    #[error("invalid family: {0}")]
    BadFamily(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
