use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no bound states below the asymptotic value {asymptote}")]
    NoBoundStates { asymptote: f64 },
    #[error("box too small: boundary tail {tail:e} exceeds {limit:e}")]
    BoxTooSmall { tail: f64, limit: f64 },
    #[error("closed form not available for {0}")]
    Unsupported(String),
    #[error("classically allowed region: V = {v} < E = {e}")]
    ClassicallyAllowed { v: f64, e: f64 },
    #[error("integration failure: {0}")]
    IntegrationFailure(String),
    #[error("units mismatch: {0} vs {1}")]
    UnitsMismatch(String, String),
    #[error("unstable vacuum: {0}")]
    UnstableVacuum(String),
    #[error("zero chirp rate; use the windowed-cosine sinc transform")]
    ZeroChirp,
    #[error("degenerate gap {gap:e} below floor {floor:e}")]
    DegenerateGap { gap: f64, floor: f64 },
    #[error("gap closure at s = {s}: gap {gap:e} below floor {floor:e}")]
    GapClosure { s: f64, gap: f64, floor: f64 },
    #[error("QES solvability condition violated at b = {b}, g = {g}")]
    SolvabilityViolated { b: f64, g: f64 },
    #[error("no closure: integral of b vanishes")]
    NoClosure,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("target mode lies in the span of the nulled modes")]
    InfeasibleNulling,
    #[error("grid too large: {size} exceeds budget {budget}")]
    GridTooLarge { size: usize, budget: usize },
    #[error("too many qubits: {0} (max 12)")]
    TooManyQubits(usize),
    #[error("sample budget exceeded: {count} > {cap}")]
    BudgetExceeded { count: u128, cap: u128 },
    #[error("infeasible gate: {0}")]
    InfeasibleGate(String),
    #[error("io: {0}")]
    Io(String),
    #[error("format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
