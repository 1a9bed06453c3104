//! Dense complex linear algebra: matrix container, exponential,
//! eigendecomposition, null spaces and the shared tolerance policy.

mod decomp;
mod eigen;
mod expm;
mod matrix;
mod tolerance;

pub use decomp::{null_space, pivoted_qr, solve};
pub use eigen::{eig, hessenberg, residual, schur, spectral_norm, EigenPair, EigenSystem, Schur};
pub(crate) use eigen::residual_scaled;
pub use expm::mat_exp;
pub use matrix::{
    axpy, basis_vector, fix_phase, inner, norm, normalized, overlap, ComplexSquareMatrix, C64,
};
pub use matrix::{I, ONE, ZERO};
pub use tolerance::TolerancePolicy;
