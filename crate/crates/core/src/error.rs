//! Crate-wide error type.

use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input value outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Not enough observations to carry out a computation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Malformed file content (CSV cell, config line, draws grammar).
    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// Structurally valid input violating a documented invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// A game without an implied probability reached a likelihood computation.
    #[error("missing implied probability: {0}")]
    MissingProbability(String),

    /// Season, week, team, or city index outside the league dimensions.
    #[error("index out of range: {0}")]
    Index(String),

    /// A log-density evaluated to NaN, or a sampler accepted an impossible state.
    #[error("non-finite density: {0}")]
    NonFiniteDensity(String),

    /// Two containers that must agree in shape do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Too few chains or retained draws for a diagnostic.
    #[error("insufficient draws: {0}")]
    InsufficientDraws(String),

    /// File declares a schema this build does not understand.
    #[error("schema version error: {0}")]
    SchemaVersion(String),

    /// An operation requiring posterior draws received none.
    #[error("empty draw set")]
    EmptyDraws,

    /// Classification metric called with only wins or only losses.
    #[error("single outcome class present")]
    SingleClass,

    /// Calibration variance term is exactly zero (every p = 0.5).
    #[error("degenerate calibration variance")]
    DegenerateVariance,

    /// Fewer than the minimum team-season points for a regression cell.
    #[error("insufficient teams: {0}")]
    InsufficientTeams(String),

    /// A prediction step referenced a cut week with no stored fit.
    #[error("missing fit: {0}")]
    MissingFit(String),

    /// League has fewer teams than the operation requires.
    #[error("too few teams: need {need}, found {found}")]
    TooFewTeams { need: usize, found: usize },

    /// Inconsistent or out-of-range configuration values.
    #[error("config error: {0}")]
    Config(String),

    /// An aggregate over an empty collection.
    #[error("empty set: {0}")]
    EmptySet(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
