use num_complex::Complex64;

use super::eigh::{eigh, SpectralDecomposition};
use super::matrix::{ComplexMatrix, SelfAdjointMatrix};
use crate::divdiff::ScalarFunction;
use crate::error::{Error, Result};

/// `Σ_i f(λ_i) E_i`.
///
/// Fails with a domain error if any eigenvalue lies outside the domain of `f`.
pub fn matrix_function(f: &ScalarFunction, m: &SelfAdjointMatrix) -> Result<SelfAdjointMatrix> {
    let d = eigh(m, None)?;
    apply_function(f, &d)
}

pub(crate) fn apply_function(f: &ScalarFunction, d: &SpectralDecomposition) -> Result<SelfAdjointMatrix> {
    f.validate()?;
    for &lam in d.eigenvalues() {
        f.check_domain(lam)?;
    }
    Ok(d.apply_real(|x| f.value_unchecked(x)))
}

/// Functional calculus for complex-valued `f`, e.g. `x ↦ e^{ix}`.
pub fn matrix_function_complex(f: impl Fn(f64) -> Complex64, m: &SelfAdjointMatrix) -> Result<ComplexMatrix> {
    Ok(eigh(m, None)?.apply(f))
}

/// `|M| = (M*M)^{1/2}`.
pub fn abs_matrix(m: &ComplexMatrix) -> Result<SelfAdjointMatrix> {
    m.ensure_square()?;
    let gram = SelfAdjointMatrix::hermitize(&m.adjoint_mul(m));
    Ok(eigh(&gram, None)?.apply_real(|x| x.max(0.0).sqrt()))
}

/// Singular values, ascending, from the eigenvalues of `M*M`.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.ensure_square()?;
    let gram = SelfAdjointMatrix::hermitize(&m.adjoint_mul(m));
    let d = eigh(&gram, Some(0.0))?;
    Ok(d.raw_eigenvalues().iter().map(|x| x.max(0.0).sqrt()).collect())
}

/// Schatten p-norm `(Σ σ_i^p)^{1/p}`; `p = ∞` gives the operator norm.
pub fn schatten_norm(m: &ComplexMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::parameter("p", p, "Schatten norms need p >= 1"));
    }
    let sigma = singular_values(m)?;
    let top = sigma.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(0.0);
    }
    if p.is_infinite() {
        return Ok(top);
    }
    // Scale by the largest singular value to keep σ^p away from overflow.
    let sum: f64 = sigma.iter().map(|s| (s / top).powf(p)).sum();
    Ok(top * sum.powf(1.0 / p))
}

/// Hilbert–Schmidt inner product `⟨A, B⟩ = Tr(A* B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    a.ensure_same_shape(b)?;
    Ok(a.data().iter().zip(b.data()).map(|(x, y)| x.conj() * y).sum())
}

/// `[[0, A], [A*, 0]]`.
pub fn selfadjoint_embed(a: &ComplexMatrix) -> Result<SelfAdjointMatrix> {
    let n = a.ensure_square()?;
    let out = ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) => a[(i, j - n)],
        (false, true) => a[(j, i - n)].conj(),
        _ => Complex64::new(0.0, 0.0),
    });
    Ok(SelfAdjointMatrix::hermitize(&out))
}
