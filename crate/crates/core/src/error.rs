use thiserror::Error;

/// Errors surfaced by the toolkit. Resource-cap violations are kept distinct
/// from negative decisions so callers can tell "no" apart from "too big".
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    RegexSyntax { pos: usize, msg: String },

    #[error("unknown symbol '{symbol}' (not in alphabet)")]
    UnknownSymbol { symbol: char },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("monoid size exceeds cap ({size} > {cap})")]
    MonoidTooLarge { size: usize, cap: usize },

    #[error("determinization exceeds state cap ({cap})")]
    DeterminizationTooLarge { cap: usize },

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("iteration cap exceeded ({cap} additions)")]
    IterationCapExceeded { cap: usize },

    #[error("recursion budget exceeded ({budget} calls)")]
    BudgetExceeded { budget: usize },

    #[error("witness synthesis: {0}")]
    Synthesis(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by a configured resource cap rather than by
    /// malformed input. The CLI maps these to exit code 2, never 1.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::MonoidTooLarge { .. }
                | Error::DeterminizationTooLarge { .. }
                | Error::InstanceTooLarge(_)
                | Error::IterationCapExceeded { .. }
                | Error::BudgetExceeded { .. }
        )
    }
}
