//! Margulis functions on sheeted sets, contraction under the random walk
//! `a_m u_r`, and the dimension-increment bootstrap.

pub mod bootstrap;
pub mod contraction;
pub mod inequality;
pub mod periodic;
pub mod quad;
pub mod sheets;
pub mod walk;

pub use bootstrap::*;
pub use contraction::*;
pub use inequality::*;
pub use periodic::*;
pub use sheets::*;
pub use walk::*;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MargulisError {
    #[error("alpha {alpha} outside the admissible range")]
    InvalidAlpha { alpha: f64 },
    #[error("zero vector has no contraction ratio")]
    ZeroVector,
    #[error("quadrature error estimate {error:e} too large for value {value:e}")]
    QuadratureFail { value: f64, error: f64 },
    #[error("no step time up to {cap} contracts every calibration direction")]
    NotFound { cap: u32 },
    #[error("invalid sheet set: {0}")]
    InvalidSheetSet(String),
    #[error("invalid random walk: {0}")]
    InvalidWalk(String),
    #[error("no covering box reaches mass {threshold:e} (best {mass:e})")]
    EmptyCovering { mass: f64, threshold: f64 },
    #[error("epsilon must be positive, got {eps}")]
    InvalidEpsilon { eps: f64 },
    #[error(transparent)]
    Lie(#[from] horolab_lie::LieError),
}
