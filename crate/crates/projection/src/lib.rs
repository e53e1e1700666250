//! Finitary projection machinery on `r = sl2(R)`.
//!
//! Points of `r` are [`Sl2`] values `[[a, b], [c, -a]]`, so `w11 = a`,
//! `w12 = b`, `w21 = c`, measured in the max-norm. The projection in
//! direction `r` is `xi_r(w) = (Ad(u_r) w)_12`, whose graph over `[0, 1]` is a
//! parabola; counting along those parabolas is what the projection theorem
//! controls.

mod certificate;
mod energy;
mod geometry;
mod interval;
mod pipeline;
mod rectangles;
mod regularize;
mod sets;
mod theorem;

pub use certificate::*;
pub use energy::*;
pub use geometry::*;
pub use interval::*;
pub use pipeline::*;
pub use rectangles::*;
pub use regularize::*;
pub use sets::*;
pub use theorem::*;

pub use horolab_lie::Sl2;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProjectionError {
    #[error("points {i} and {j} coincide")]
    DuplicatePoints { i: usize, j: usize },
    #[error("energy constant {d} exceeds cap {cap}")]
    HypothesisFail { d: f64, cap: f64 },
    #[error("point set carries no regularity certificate")]
    CertificateMissing,
    #[error("no rotation in {{0, 0.1, 0.9}} keeps a quarter of the set")]
    GeneralPositionFail,
    #[error("no direction is both projection-good and recurrent ({good} good, {thick} thick of {total})")]
    RecurrenceFail { good: usize, thick: usize, total: usize },
    #[error("#F = {n} gives (#F)^-eps = {value}, above the size floor {floor}")]
    SizeFloor { n: usize, value: f64, floor: f64 },
    #[error("empty point set")]
    Empty,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Lie(#[from] horolab_lie::LieError),
}

pub type Result<T> = std::result::Result<T, ProjectionError>;
