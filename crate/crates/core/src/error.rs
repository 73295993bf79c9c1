use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("insufficient precision: {0}")]
    PrecisionError(String),
    #[error("no rational with denominator <= {bound} matches {approx}")]
    ReconstructionFailure { approx: String, bound: u64 },
    #[error("parse error in {field}: {detail}")]
    Parse { field: String, detail: String },
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("lift obstruction of order {order} ({detail})")]
    LiftObstruction { order: String, detail: String },
    #[error("range error: {0}")]
    RangeError(String),
    #[error("presentation is not finer: {0}")]
    NotFiner(String),
    #[error("presentation mismatch: {0}")]
    PresentationMismatch(String),
    #[error("invalid trivialisation: {0}")]
    InvalidTrivialisation(String),
    #[error("map is not surjective: {0}")]
    NotSurjective(String),
    #[error("singular transport on component {0}")]
    SingularTransport(usize),
    #[error("module is not free of the expected rank: {0}")]
    NotFree(String),
    #[error("incomplete data, missing: {}", .0.join(", "))]
    IncompleteData(Vec<String>),
    #[error("classification error: {0}")]
    ClassificationError(String),
    #[error("critical: {0}")]
    Critical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
