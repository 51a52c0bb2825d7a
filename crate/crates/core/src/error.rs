use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid support vector: {0}")]
    InvalidVector(String),
    #[error("vector {index} has weight {found}, family weight is {expected}")]
    WeightMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate vector at positions {first} and {second}")]
    DuplicateVector { first: usize, second: usize },
    #[error("ratio undefined below two vectors")]
    RatioUndefined,
    #[error("empty family")]
    EmptyFamily,
    #[error("index {index} out of range for family of {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parameters exceed configured limits: {0}")]
    LimitsExceeded(String),
    #[error("parameters violate conditions: {}", .0.join("; "))]
    InvalidParams(Vec<String>),
    #[error("level {level} out of range 0..={t}")]
    LevelOutOfRange { level: usize, t: usize },
    #[error("capacity violated at level {level}: |S ∪ T_r| = {found} < {required}")]
    CapacityViolated {
        level: usize,
        found: usize,
        required: usize,
    },
    #[error("extraction requires C > 2 (got {0})")]
    ExtractDomain(String),
    #[error("brute-force cap exceeded: family has {size} vectors, cap is {cap}")]
    BruteForceCap { size: usize, cap: usize },
    #[error("exhaustive check needs {needed} subsets, cap is {cap}; use structural mode")]
    SubsetCap { needed: String, cap: u64 },
    #[error("infeasible family: {0}")]
    Infeasible(String),
    #[error("tree does not match family: {0}")]
    TreeMismatch(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
