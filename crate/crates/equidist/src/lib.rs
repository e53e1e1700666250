//! Horospherical and sparse averages on `X = G / Gamma`, the measures that
//! feed them, and the density scan for orbits of the upper-triangular group.

mod averages;
mod density;
mod function;
mod measure;

pub use averages::*;
pub use density::*;
pub use function::*;
pub use measure::*;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquidistError {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("support radius {support} exceeds the chart limit {limit}")]
    ChartTooSmall { support: f64, limit: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, EquidistError>;

/// Monte Carlo stream labels.
pub mod labels {
    pub const GAUGE: u64 = 0x51;
    pub const HORO: u64 = 0x52;
    pub const SPARSE: u64 = 0x53;
    pub const DENSITY: u64 = 0x54;
    pub const TEST_GRID: u64 = 0x55;
}
