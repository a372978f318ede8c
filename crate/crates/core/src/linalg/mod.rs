//! Dense complex matrices, Hermitian eigendecomposition, functional calculus
//! and Schatten norms.

mod eigh;
mod matrix;
mod norms;

pub use eigh::{
    default_cluster_tolerance, eigh, eigh_matrix, eigh_with, jacobi_eigen, Eigen, SpectralDecomposition,
};
pub use matrix::{ComplexMatrix, MatrixJson, SelfAdjointMatrix};
pub use norms::{
    abs_matrix, hs_inner, matrix_function, matrix_function_complex, schatten_norm, selfadjoint_embed,
    singular_values,
};
