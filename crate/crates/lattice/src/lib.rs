mod cache;
mod distance;
mod elem;
mod height;
mod lattice;
mod recurrence;
mod reduce;
mod stabilizer;

pub use cache::*;
pub use elem::*;
pub use distance::*;
pub use height::*;
pub use lattice::*;
pub use recurrence::*;
pub use reduce::*;
pub use stabilizer::*;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("word length {requested} exceeds cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("optimizer sits on the cache boundary shell (best value {value})")]
    CacheTooSmall { value: f64 },
    #[error("cache file: {0}")]
    Parse(String),
    #[error("io: {0}")]
    Io(String),
}

impl LatticeError {
    /// The best available value carried by a `CacheTooSmall` flag.
    pub fn value(&self) -> Option<f64> {
        match self {
            LatticeError::CacheTooSmall { value } => Some(*value),
            _ => None,
        }
    }
}
