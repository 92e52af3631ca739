use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: expected one of {}", .expected.join(", "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
    },

    #[error("LTLf is only defined on non-empty traces")]
    EmptyTrace,

    #[error("atom `{0}` is not part of the alphabet")]
    OutOfAlphabet(String),

    #[error("letter index {0} is outside the alphabet")]
    LetterOutOfRange(usize),

    #[error("resource cap exceeded: {what} (limit {limit})")]
    Resource { what: &'static str, limit: u64 },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid lifting side {0}: expected 1 or 2")]
    InvalidSide(u8),

    #[error("domain schema error: {0}")]
    Schema(String),

    #[error("uniqueness of environment reaction violated at state {state:?}, action `{action}`: reactions `{first}` and `{second}` lead to the same state")]
    Uniqueness {
        state: Vec<String>,
        action: String,
        first: String,
        second: String,
    },

    #[error("reachable state {state:?} has no applicable agent action")]
    DeadState { state: Vec<String> },

    #[error("duplicate transition for state {state:?}, action `{action}`, reaction `{reaction}`")]
    DuplicateTransition {
        state: Vec<String>,
        action: String,
        reaction: String,
    },

    #[error("arenas were built from different domains")]
    DomainMismatch,

    #[error("trace is not legal in the domain: {0}")]
    IllegalTrace(String),

    #[error("goals are not a multi-tier goal: tier {tier} admits a trace not accepted by tier {}", .tier - 1)]
    NotMultiTier {
        tier: usize,
        witness: Vec<String>,
    },

    #[error("at least one goal is required")]
    NoGoals,

    #[error("strategy has stopped; no further moves accepted")]
    Stopped,

    #[error("expected action `{expected}`, got `{got}`")]
    ActionMismatch { expected: String, got: String },

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("bundle does not match inputs: {0}")]
    BundleMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 for IO/system failures, 2 for semantic
    /// rejection, 3 for exceeded resource caps.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 1,
            Error::Resource { .. } => 3,
            _ => 2,
        }
    }

    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::EmptyTrace => "empty_trace",
            Error::OutOfAlphabet(_) => "out_of_alphabet",
            Error::LetterOutOfRange(_) => "letter_out_of_range",
            Error::Resource { .. } => "resource",
            Error::AlphabetMismatch(_) => "alphabet_mismatch",
            Error::InvalidSide(_) => "invalid_side",
            Error::Schema(_) => "schema",
            Error::Uniqueness { .. } => "uniqueness",
            Error::DeadState { .. } => "dead_state",
            Error::DuplicateTransition { .. } => "duplicate_transition",
            Error::DomainMismatch => "domain_mismatch",
            Error::IllegalTrace(_) => "illegal_trace",
            Error::NotMultiTier { .. } => "not_multi_tier",
            Error::NoGoals => "no_goals",
            Error::Stopped => "stopped",
            Error::ActionMismatch { .. } => "action_mismatch",
            Error::UnknownName { .. } => "unknown_name",
            Error::BundleMismatch(_) => "bundle_mismatch",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
