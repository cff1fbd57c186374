use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} must be a probability in [0, 1], got {value}")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("{name} must be a finite nonnegative count, got {value}")]
    InvalidCount { name: &'static str, value: f64 },

    #[error("infected count {infected} exceeds population {total}")]
    InfectedExceedsTotal { infected: f64, total: f64 },

    #[error("population is empty (total = 0)")]
    EmptyPopulation,

    #[error("repetitions must be at least 1")]
    ZeroRepetitions,

    #[error("tolerance must lie strictly between 0 and 1, got {0}")]
    InvalidTolerance(f64),

    #[error("solver cap must be at least 1")]
    ZeroCap,

    #[error("conditioning event has probability zero")]
    ConditioningImpossible,

    #[error("unreachable at any k: prevalence is 1 and sensitivity is below 1")]
    UnreachableAtAnyK,

    #[error("test is not informative (specificity must exceed 1 - sensitivity)")]
    NotInformative,

    #[error("prevalence list is empty")]
    EmptyPrevalences,

    #[error("prevalence {0} outside [0, 1)")]
    PrevalenceOutOfRange(f64),

    #[error("unknown test preset `{0}` (expected `hutchison` or `biomedomics`)")]
    UnknownPreset(String),

    #[error("{0} must be at least 1")]
    ZeroSize(&'static str),

    #[error("no trial matched the conditioning pattern")]
    NoConditioningHits,

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("{message} at line {line}")]
    Parse { line: usize, message: String },

    #[error("start day {start} outside series range {first}..={last}")]
    StartDayOutOfRange { start: u32, first: u32, last: u32 },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
