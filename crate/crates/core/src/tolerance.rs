//! Numerical tolerances shared by the library, the test suites and the CLI.

use serde::{Deserialize, Serialize};

/// Every threshold the library uses, in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative bound on `‖M − M*‖_F` accepted for a self-adjoint matrix.
    pub self_adjoint: f64,
    /// Jacobi stops once the off-diagonal Frobenius mass is below this times `‖M‖_F`.
    pub jacobi_off_diagonal: f64,
    pub jacobi_max_sweeps: usize,
    /// Eigenvalues closer than this times `max(1, spectral radius)` share a projection.
    pub cluster_relative: f64,
    /// Divided differences switch to the derivative branch below this relative gap.
    pub divdiff_near_equal: f64,
    /// Half-width of the Taylor window used for `g_α` around `x = 1`.
    pub g_alpha_taylor: f64,
    /// Largest imaginary part tolerated in a real quadratic form.
    pub imaginary_residue: f64,
    /// Residual bound for trace preservation, unitality and unitarity of channels.
    pub channel: f64,
    /// Minimum `|λ|` for a matrix to count as invertible.
    pub invertibility: f64,
    /// Shift `δ` added to `MM*` in the positive-definite ensemble.
    pub positive_definite_shift: f64,
    /// Default floor for normalized gaps.
    pub gap: f64,
    /// Default step of the central finite-difference oracle.
    pub fd_step: f64,
    /// Absolute target of the adaptive quadrature.
    pub quadrature_absolute: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        self_adjoint: 1e-12,
        jacobi_off_diagonal: 1e-13,
        jacobi_max_sweeps: 100,
        cluster_relative: 1e-8,
        divdiff_near_equal: 1e-7,
        g_alpha_taylor: 1e-5,
        imaginary_residue: 1e-10,
        channel: 1e-10,
        invertibility: 1e-6,
        positive_definite_shift: 1e-3,
        gap: 1e-9,
        fd_step: 1e-4,
        quadrature_absolute: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
