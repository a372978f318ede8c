//! Operator-integral machinery for trace functionals of matrices and
//! randomized verification of the optimal 2-uniform convexity inequality
//! for Schatten classes,
//!
//! ```text
//! ‖A + B‖_p² + ‖A − B‖_p² ≥ 2‖A‖_p² + 2(p − 1)‖B‖_p²,   1 < p ≤ 2,
//! ```
//!
//! together with each intermediate inequality its proof goes through.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`linalg`] | complex matrices, Jacobi `eigh`, functional calculus, Schatten norms |
//! | [`divdiff`] | scalar functions, divided differences, two-variable kernels |
//! | [`opint`] | `Q_F^{A,B}`, quadratic forms, trace derivatives, quasi-entropy |
//! | [`channel`] | unital trace-preserving channels: pinchings and unitary mixtures |
//! | [`verify`] | random ensembles, inequality checks, oracles, suites and reports |

pub mod channel;
pub mod divdiff;
pub mod error;
pub mod linalg;
pub mod opint;
pub mod tolerance;
pub mod verify;

pub use channel::QuantumChannel;
pub use divdiff::{Kernel2, ScalarFunction};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, SelfAdjointMatrix, SpectralDecomposition};
pub use num_complex::Complex64;
pub use tolerance::Tolerances;
pub use verify::{GapRecord, SuiteReport, TrialConfig};
