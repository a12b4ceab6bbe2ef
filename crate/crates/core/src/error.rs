use thiserror::Error;

/// Every failure the engine reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("no relation bound to atom `{0}`")]
    MissingRelation(String),
    #[error("relation `{relation}` has arity {found}, atom expects {expected}")]
    ArityMismatch { relation: String, expected: usize, found: usize },
    #[error("relation `{relation}`, column `{column}`: {message}")]
    KindMismatch { relation: String, column: String, message: String },
    #[error("cannot parse value `{0}`")]
    BadValue(String),
    #[error("{what} exceeds the limit of {limit}")]
    SizeLimitExceeded { what: String, limit: usize },
    #[error("interval {0} has an endpoint outside the tree's grid")]
    UnknownInterval(String),
    #[error("`{0}` is not an interval variable of the query")]
    NotIntervalVariable(String),
    #[error("`{0}` is not an interval join variable")]
    NotJoinVariable(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("fresh variable `{0}` collides with an existing variable")]
    NameCollision(String),
    #[error("self-joins are not supported here")]
    SelfJoinUnsupported,
    #[error("bitstrings must share one length, found {0} and {1}")]
    MixedBitstringLengths(usize, usize),
    #[error("hypergraph has no Berge cycle of length {0}")]
    NoBergeCycle(usize),
    #[error("vertex `{0}` is not covered by any edge")]
    UncoverableVertex(String),
    #[error("query is not alpha-acyclic")]
    NotAcyclic,
    #[error("query is not an equality join: interval variable `{0}` joins several atoms")]
    NotEquiJoin(String),
    #[error("oracle input has {cells} candidate combinations, cap is {cap}")]
    TooLargeForOracle { cells: u128, cap: u128 },
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
