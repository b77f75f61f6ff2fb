use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("level {0} is not a special height of this presentation")]
    Level(String),
    #[error("arc system is not realizable: {0}")]
    Unrealizable(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("graph needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("invalid move: {0}")]
    Move(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
