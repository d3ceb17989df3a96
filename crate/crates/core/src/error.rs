use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate register id `{0}`")]
    DuplicateRegister(String),
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("unknown party `{0}`")]
    UnknownParty(String),
    #[error("occupation {occupation} exceeds cutoff {cutoff} of register `{register}`")]
    OccupationOutOfRange {
        register: String,
        occupation: usize,
        cutoff: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("incomplete measurement basis: {0}")]
    IncompleteBasis(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension {dimension} exceeds the dense limit {limit}")]
    TooLarge { dimension: usize, limit: usize },
    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),
}
