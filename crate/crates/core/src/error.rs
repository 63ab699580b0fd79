use std::path::PathBuf;

use crate::model::ParticipantId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("participant {0} is not in the roster")]
    UnknownParticipant(ParticipantId),

    #[error("a participant cannot be compared with itself ({0})")]
    SelfPair(ParticipantId),

    #[error("conference frame length must be positive")]
    ZeroFrame,

    #[error("roster must contain at least two participants, found {0}")]
    RosterTooSmall(usize),

    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),

    #[error("conference instance failed validation: {}", .0.join("; "))]
    Invalid(Vec<String>),

    #[error("participant {participant} has {count} rating(s); at least 2 are needed to split")]
    TooFewRatings { participant: ParticipantId, count: usize },

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("no relevance label for participant {participant}, session {session}")]
    MissingLabel {
        participant: ParticipantId,
        session: String,
    },

    #[error("invalid threshold grid: {0}")]
    InvalidGrid(String),

    #[error("invalid generator config: {0}")]
    InvalidConfig(String),

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("cannot write dataset: {0}")]
    Unwritable(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
