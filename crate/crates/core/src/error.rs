use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("retry cap of {0} attempts exceeded")]
    RetryCap(usize),
    #[error("multi-edge would arise when smoothing vertex {0}")]
    MultiEdge(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
