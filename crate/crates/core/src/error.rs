use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FapError {
    #[error("malformed input: {0}")]
    MalformedEdge(String),
    #[error("forest edges contain a cycle")]
    NotAForest,
    #[error("instance is infeasible: forest plus links is not 2-edge-connected")]
    Infeasible,
    #[error("every forest component must be a path with at least one edge")]
    NotPaths,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("search budget exceeded; optimum lies in [{lower}, {upper}]")]
    BudgetExceeded { lower: usize, upper: usize },
    #[error("profile cannot produce a feasible instance: {0}")]
    UnsatisfiableProfile(String),
    #[error("witness is not a feasible solution")]
    InfeasibleWitness,
    #[error("internal assertion failed: {0}")]
    Assertion(String),
}

impl FapError {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            FapError::Infeasible => 2,
            FapError::Assertion(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T, E = FapError> = std::result::Result<T, E>;
