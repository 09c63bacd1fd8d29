//! Dense real linear algebra sized for n up to about 16.

mod eigen;
mod matrix;
mod subspace;

pub use eigen::{
    numerical_rank, singular_values, sym_eig, SpectralDecomposition, MAX_SWEEPS,
    OFF_DIAGONAL_TOL, SIGN_TOL, SYMMETRY_TOL,
};
pub use matrix::{frobenius_distance, Matrix};
pub use subspace::{
    kernel_basis, kernel_projection, orthonormal_completion, principal_angle_sines, projector,
    COMPLETION_PIVOT_TOL, ORTHONORMAL_TOL,
};

/// Default relative threshold separating numerically zero eigenvalues.
pub const DEFAULT_TOL: f64 = 1e-9;
