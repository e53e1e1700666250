//! Exact small-matrix kernel for `G = SL2(C)` and `G = SL2(R) x SL2(R)`.
//!
//! `H` is the real `SL2(R)` (diagonally embedded in the product case) and the
//! Lie algebra splits as `g = h + r` with `r` an `Ad(H)`-invariant complement:
//! `r = i sl2(R)` for `SL2(C)` and `r = sl2(R) + 0` for the product.
//! Every sl2 component is measured in the coordinate max-norm
//! `max(|w11|, |w12|, |w21|)`.

mod algebra;
mod boxes;
mod group;
mod matfn;
mod sl2;
mod transversal;

pub use algebra::{adjoint, exp_lie, log_group, xi, LieVector};
pub use boxes::{
    box_membership, bruhat, compose, from_bruhat, h_box, BoxKind, BoxParams, BruhatCoords, HBox, Membership,
};
pub use group::{a_elem, n_elem, u_elem, u_minus, v_elem, AmbientGroup, GroupElement};
pub use matfn::{exp_c, exp_r, log_c, log_r, M2c, M2r};
pub use sl2::Sl2;
pub use transversal::{
    bch_difference, decompose_transversal, split_near_h, BchDifference, Decomposition,
    DEFAULT_BETA0, DEFAULT_NEIGHBORHOOD,
};

pub use num_complex::Complex64 as C64;

/// Kernel failures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LieError {
    #[error("transversal split did not converge in {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("element at distance {distance} from identity exceeds neighborhood radius {radius}")]
    OutOfNeighborhood { distance: f64, radius: f64 },
    #[error("Bruhat chart singular: (1,1) entry {a11:e}")]
    ChartSingular { a11: f64 },
}

/// Tolerance for determinant drift of produced group elements.
pub const DET_TOL: f64 = 1e-12;
