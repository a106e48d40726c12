use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("network is disconnected")]
    Disconnected,
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("weight vector has length {actual}, network has {expected} edges")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("edge {edge} has weight {value}, expected a value in (0, 1]")]
    InvalidWeight { edge: usize, value: f64 },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("point ({lambda_c}, {h_avg}) lies outside the reference box")]
    OutsideReference { lambda_c: f64, h_avg: f64 },
    #[error("failed to parse edge list at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
