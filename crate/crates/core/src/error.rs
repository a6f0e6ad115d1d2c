use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid side tag: {0}")]
    InvalidTag(String),
    #[error("cannot project from level {from} to finer level {to}")]
    LevelOrder { from: u32, to: u32 },
    #[error("grid exponent {grid} does not align with level {level} (need grid > level)")]
    GridMisaligned { level: u32, grid: u32 },
    #[error(
        "solver did not converge after {iterations} iterations (relative residual {residual:e})"
    )]
    NotConverged { iterations: usize, residual: f64 },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid L-function: {0}")]
    InvalidLFunction(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
