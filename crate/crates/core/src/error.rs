use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid walk parameters: {0}")]
    InvalidParams(String),

    #[error("coin is not unitary (max deviation {deviation:e})")]
    NonUnitaryCoin { deviation: f64 },

    #[error("coin dimension {got} does not match 2^{dims} = {expected}")]
    CoinDimension {
        dims: usize,
        expected: usize,
        got: usize,
    },

    #[error("window size {z}^{w} overflows the vertex index type")]
    WindowOverflow { z: u32, w: usize },

    #[error("vertex index {index} out of range for window of {size} vertices")]
    IndexOutOfRange { index: u64, size: u64 },

    #[error("coordinates {0:?} do not lie inside the window")]
    CoordsOutOfRange(Vec<u32>),

    #[error("window of {size} vertices exceeds the enumeration cap of {cap}; pass the override to enumerate anyway")]
    ResourceCap { size: u64, cap: u64 },

    #[error("no solution found after {shifts} window shifts")]
    NoSolution { shifts: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed solution file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
