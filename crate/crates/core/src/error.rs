use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A table is malformed: wrong shape, or an entry points outside its codomain.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("level {level} is outside the truncation (height {height}, condition needs levels {needed})")]
    LevelOutOfRange {
        level: usize,
        height: usize,
        needed: String,
    },

    #[error("invalid indices: {0}")]
    InvalidIndices(String),

    #[error("enumeration budget of {budget} exhausted while {context}")]
    BudgetExhausted { budget: u64, context: String },

    /// Input data violates a precondition (cocycle identity, category axioms, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A constructed filler failed replay. This contradicts the theory and
    /// indicates a bug.
    #[error("internal verification failure: {0}")]
    Verification(String),
}
