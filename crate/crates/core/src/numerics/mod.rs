//! Dense complex linear algebra for small quantum systems.

mod density;
mod eigen;
mod matrix;
mod norms;
pub mod random;
mod unitary;

pub use density::{
    binary_entropy, check_distribution, entropy_of_spectrum, partial_trace, partial_trace_matrix, von_neumann_entropy,
    DensityMatrix, Keep, Units, STATE_TOL,
};
pub(crate) use density::{check_unit, mix_matrices};
pub use eigen::{herm_eig, herm_eigvals, HermEigen, Spectrum, HERMITIAN_TOL};
pub use matrix::{basis, fourier_state, inner, norm, normalized, uniform_superposition, CMatrix, C64};
pub use norms::{operator_norm, operator_schmidt_rank, operator_schmidt_values, realign, singular_values, trace_norm};
pub use unitary::{largest_angular_gap, unitary_eig, UnitaryEigen, EIGENPAIR_TOL};
