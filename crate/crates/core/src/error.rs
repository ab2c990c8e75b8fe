use thiserror::Error;

use crate::labels::LabelSet;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid Henneberg move{}: {reason}", index.map(|i| format!(" #{i}")).unwrap_or_default())]
    InvalidMove { index: Option<usize>, reason: String },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("excision error: {0}")]
    Excision(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("rank jumps by more than one between flats {lower} and {upper}")]
    RankGap { lower: LabelSet, upper: LabelSet },

    #[error("not a cone of the fan: {0}")]
    NotACone(String),

    #[error("codimension mismatch: {0}")]
    Dimension(String),

    #[error("generators have rank {rank} < ambient dimension {m}")]
    NotFullRank { rank: usize, m: usize },

    #[error("no generic shift found after {retries} retries")]
    Genericity { retries: u32 },

    #[error("graph is not Laman")]
    NotLaman,

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidGraph(_) => "invalid_graph",
            Error::InvalidMove { .. } => "invalid_move",
            Error::NotFound(_) => "not_found",
            Error::Excision(_) => "excision",
            Error::Precondition(_) => "precondition",
            Error::RankGap { .. } => "rank_gap",
            Error::NotACone(_) => "not_a_cone",
            Error::Dimension(_) => "codimension",
            Error::NotFullRank { .. } => "not_full_rank",
            Error::Genericity { .. } => "genericity",
            Error::NotLaman => "not_laman",
            Error::Internal(_) => "internal",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
