use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    State(#[from] cluster_statevector::Error),
    #[error(transparent)]
    Protocol(#[from] cluster_protocol::Error),
    #[error(transparent)]
    Growth(#[from] cluster_growth::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Whether the error stems from the requested parameters rather than
    /// from a run that went wrong.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::InvalidArgument(_) => true,
            Error::Growth(cluster_growth::Error::RetryCapExceeded(_)) => false,
            Error::Growth(
                cluster_growth::Error::InvalidArgument(_) | cluster_growth::Error::NoNetGrowth(_),
            ) => true,
            Error::Protocol(
                cluster_protocol::Error::InvalidSize(_) | cluster_protocol::Error::InvalidArgument(_),
            ) => true,
            Error::State(cluster_statevector::Error::TooManyQubits { .. }) => true,
            _ => false,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_usage() {
            2
        } else {
            1
        }
    }
}
