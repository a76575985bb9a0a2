use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("variable name `{0}` appears more than once")]
    DuplicateName(String),
    #[error("variable `{0}` has cardinality {1}; at least 2 levels are required")]
    DegenerateCardinality(String, usize),
    #[error("schema has no variables")]
    EmptySchema,
    #[error("state space of {0} variables exceeds the cap of {1} states")]
    StateSpaceTooLarge(usize, usize),
    #[error("expected {expected} table entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("entry {index} is {value}; probabilities must be finite and non-negative")]
    InvalidProbability { index: usize, value: f64 },
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("weight {index} is negative ({value})")]
    NegativeWeight { index: usize, value: f64 },
    #[error("all weights are zero")]
    AllZeroWeights,
    #[error("dataset has no rows")]
    EmptyData,
    #[error("row {row}: value {value} of variable `{variable}` is outside its {cardinality} levels")]
    ValueOutOfRange {
        row: usize,
        variable: String,
        value: usize,
        cardinality: usize,
    },
    #[error("row {row} has {found} values, schema has {expected} variables")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("subset must be non-empty")]
    EmptySubset,
    #[error("variable index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("target and conditioning sets overlap")]
    OverlappingSets,
    #[error("variable name `{0}` occurs in more than one factor")]
    NameCollision(String),
    #[error("distributions are defined over different schemas")]
    SchemaMismatch,
    #[error("truncation order {m} is outside 1..={n}")]
    OrderOutOfRange { m: usize, n: usize },
    #[error("approximation undefined at state {state:?}: a marginal in the denominator vanishes")]
    UndefinedApproximation { state: Vec<usize> },
    #[error("support violation at state {state:?}: a log ratio is infinite or undefined")]
    SupportViolation { state: Vec<usize> },
    #[error("profile is missing an interaction for subset {0:?}")]
    IncompleteProfile(Vec<usize>),
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("{0}")]
    Domain(&'static str),
    #[error("graphs are defined over different node sets")]
    NodeMismatch,
    #[error("invalid graph: {0}")]
    InvalidGraph(&'static str),
    #[error("distance identity violated: residual {0}")]
    Inconsistent(f64),
}
