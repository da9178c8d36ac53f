use thiserror::Error;

/// Errors shared by all normalisation machinery.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("position {pos} out of range for a word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },

    #[error("schedule parameter must be at least 2, got {p}")]
    ScheduleParameter { p: usize },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("letter index {index} out of range for an alphabet of {size} letters")]
    LetterOutOfRange { index: u32, size: usize },

    #[error("words over different alphabets cannot be combined")]
    AlphabetMismatch,

    #[error(
        "the triangular schedule failed to normalise `{word}` (got `{output}`); \
         the instance is not of the class this schedule requires"
    )]
    ClassViolation { word: String, output: String },

    #[error("pair table is not idempotent at ({s}, {t})")]
    NotIdempotent { s: String, t: String },

    #[error("pair table violates the alternation law at triple ({a}, {b}, {c})")]
    AlternationLaw { a: String, b: String, c: String },

    #[error("no neutral letter configured for this instance")]
    NoNeutralLetter,

    #[error("letter `{letter}` is not neutral: pair ({s}, {t}) maps to ({u}, {v})")]
    NotNeutral { letter: String, s: String, t: String, u: String, v: String },

    #[error("distinct normal forms `{a}` and `{b}` are reachable from `{word}`")]
    NotANormalisation { word: String, a: String, b: String },

    #[error("no normal form is reachable from `{word}`")]
    Divergence { word: String },

    #[error("search budget exceeded while processing `{word}`")]
    BudgetExceeded { word: String },

    #[error("not a Garside family: {0}")]
    NotAGarsideFamily(String),

    #[error("rewriting system rejected: {0}")]
    InvalidRewriteSystem(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid instance data: {0}")]
    InvalidInstance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
