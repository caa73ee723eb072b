//! Dense complex linear algebra.
//!
//! Decompositions are delegated to `nalgebra`; the matrix type itself is a
//! plain row-major buffer so that index arithmetic for bipartite systems stays
//! explicit. All functions are pure.

mod matrix;
mod spectral;
mod unitary;

pub use matrix::ComplexMatrix;
pub use spectral::{
    det, det_real, eig_hermitian, eig_hermitian_with, eigenvalues_hermitian, eigenvalues_hermitian_with, is_psd,
    least_squares_min_norm, rank, singular_values, trace_norm, HermitianSpectrum, PsdCheck, Tolerance,
};
pub use unitary::{ensure_unitary, orthonormalize, unitarity_defect, unitary_completion};
