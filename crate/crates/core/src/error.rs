use thiserror::Error;

/// Errors produced by pattern construction, class checks and index searches.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not stochastic: row {row} sums to {sum} (must be 1 within {tolerance})")]
    NotStochastic { row: usize, sum: f64, tolerance: f64 },

    #[error("matrix has a negative entry at ({row}, {col}): {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("row {row} has no entry above the zero tolerance {tolerance}")]
    ZeroRow { row: usize, tolerance: f64 },

    #[error("pattern has an all-zero row (row {row}); operation requires a row-allowable pattern")]
    NotRowAllowable { row: usize },

    #[error("matrix set must contain at least one pattern")]
    EmptySet,

    #[error("matrix set members must share one dimension (found {a} and {b})")]
    MixedDimensions { a: usize, b: usize },

    #[error("expected {patterns} labels, got {labels}")]
    LabelCountMismatch { patterns: usize, labels: usize },

    #[error("Sarymsakov check is exponential in the dimension; n = {n} exceeds the limit {limit}")]
    SarymsakovLimit { n: usize, limit: usize },

    #[error("operation requires automaton patterns (exactly one nonzero per row); pattern {index} is not one")]
    NotAutomaton { index: usize },

    #[error("search universe holds about {estimated} sets, over the budget of {budget}; raise the budget to run anyway")]
    BudgetExceeded { estimated: u128, budget: u64 },

    #[error("exhaustive search supports n <= 12 and set size <= 8; got n = {n}, m = {m}")]
    SearchLimits { n: usize, m: usize },

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("invalid set cover instance: {0}")]
    InvalidSetCover(String),

    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
