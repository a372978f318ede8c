//! Double operator integrals `Q_F^{A,B}(X) = Σ_{j,k} F(λ_j, μ_k) E_j X E_k`
//! and the trace-functional derivatives built from them.

use num_complex::Complex64;

use crate::divdiff::{Kernel2, ScalarFunction};
use crate::error::{Error, Result};
use crate::linalg::{eigh, hs_inner, ComplexMatrix, SelfAdjointMatrix, SpectralDecomposition};
use crate::tolerance::Tolerances;

/// `Q_F^{A,B}` with both spectral decompositions and the kernel grid precomputed.
///
/// Applies as a Hadamard multiplier in the eigenbases: `V_A (W ∘ V_A* X V_B) V_B*`
/// where `W_ab = F(λ_{c(a)}, μ_{c(b)})` uses cluster representatives.
#[derive(Debug, Clone)]
pub struct QOperator {
    left: SpectralDecomposition,
    right: SpectralDecomposition,
    weights: ComplexMatrix,
}

impl QOperator {
    pub fn new(kernel: &Kernel2, a: &SelfAdjointMatrix, b: &SelfAdjointMatrix) -> Result<Self> {
        Self::from_decompositions(kernel, eigh(a, None)?, eigh(b, None)?)
    }

    pub fn from_decompositions(
        kernel: &Kernel2,
        left: SpectralDecomposition,
        right: SpectralDecomposition,
    ) -> Result<Self> {
        let grid = kernel.grid(left.eigenvalues(), right.eigenvalues())?;
        let weights = ComplexMatrix::from_fn(left.dim(), right.dim(), |r, c| {
            Complex64::new(grid[left.cluster_of()[r]][right.cluster_of()[c]], 0.0)
        });
        Ok(Self { left, right, weights })
    }

    pub fn left(&self) -> &SpectralDecomposition {
        &self.left
    }

    pub fn right(&self) -> &SpectralDecomposition {
        &self.right
    }

    fn check_shape(&self, x: &ComplexMatrix) -> Result<()> {
        if x.rows() != self.left.dim() || x.cols() != self.right.dim() {
            return Err(Error::dimension(
                format!("{}x{}", self.left.dim(), self.right.dim()),
                format!("{}x{}", x.rows(), x.cols()),
            ));
        }
        Ok(())
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_shape(x)?;
        let va = self.left.eigenvectors();
        let vb = self.right.eigenvectors();
        let y = &va.adjoint_mul(x) * vb;
        let z = self.weights.hadamard(&y);
        Ok(&(va * &z) * &vb.adjoint())
    }

    /// `Re ⟨X, Q(X)⟩`; errors if the imaginary part is not negligible.
    pub fn quad_form(&self, x: &ComplexMatrix) -> Result<f64> {
        let qx = self.apply(x)?;
        let v = hs_inner(x, &qx)?;
        let scale = v.re.abs().max(1.0);
        if v.im.abs() > Tolerances::DEFAULT.imaginary_residue * scale {
            return Err(Error::Internal(format!(
                "quadratic form has imaginary part {:.3e}; kernel or inputs are not self-adjoint",
                v.im
            )));
        }
        Ok(v.re)
    }
}

/// `Q_F^{A,B}(X)`.
pub fn q_apply(
    kernel: &Kernel2,
    a: &SelfAdjointMatrix,
    b: &SelfAdjointMatrix,
    x: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    QOperator::new(kernel, a, b)?.apply(x)
}

/// `⟨X, Q_F^{A,B}(X)⟩`.
pub fn quad_form(kernel: &Kernel2, a: &SelfAdjointMatrix, b: &SelfAdjointMatrix, x: &ComplexMatrix) -> Result<f64> {
    QOperator::new(kernel, a, b)?.quad_form(x)
}

/// `Tr f(A)`.
pub fn trace_value(f: &ScalarFunction, a: &SelfAdjointMatrix) -> Result<f64> {
    let d = eigh(a, None)?;
    trace_value_of(f, &d)
}

fn trace_value_of(f: &ScalarFunction, d: &SpectralDecomposition) -> Result<f64> {
    check_spectrum(f, d)?;
    Ok((0..d.dim()).map(|k| f.value_unchecked(d.eigenvalue_of_vector(k))).sum())
}

fn check_spectrum(f: &ScalarFunction, d: &SpectralDecomposition) -> Result<()> {
    f.validate()?;
    d.eigenvalues().iter().try_for_each(|&x| f.check_domain(x))
}

fn check_pair(a: &SelfAdjointMatrix, b: &SelfAdjointMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::dimension(a.dim(), b.dim()));
    }
    Ok(())
}

/// `d/dt|₀ Tr f(A + tB) = Tr(f′(A) B)`.
pub fn trace_first_derivative(f: &ScalarFunction, a: &SelfAdjointMatrix, b: &SelfAdjointMatrix) -> Result<f64> {
    check_pair(a, b)?;
    let d = eigh(a, None)?;
    check_spectrum(f, &d)?;
    let fprime = d.apply(|x| Complex64::new(f.first_unchecked(x), 0.0));
    Ok((&fprime * b.as_matrix()).trace().re)
}

/// `d²/dt²|₀ Tr f(A + tB)` as the reduced double sum
/// `Σ_{i,j} [f^[2](λ_i, λ_j, λ_i) + f^[2](λ_j, λ_i, λ_j)] Tr(B E_j B E_i)`.
pub fn trace_second_derivative(f: &ScalarFunction, a: &SelfAdjointMatrix, b: &SelfAdjointMatrix) -> Result<f64> {
    check_pair(a, b)?;
    let d = eigh(a, None)?;
    trace_second_derivative_of(f, &d, b)
}

pub(crate) fn trace_second_derivative_of(
    f: &ScalarFunction,
    d: &SpectralDecomposition,
    b: &SelfAdjointMatrix,
) -> Result<f64> {
    check_spectrum(f, d)?;
    let kernel = Kernel2::SecondSum(f.clone());
    let lambda = d.eigenvalues();
    let sandwiches: Vec<ComplexMatrix> = d.projections().iter().map(|e| b.as_matrix() * e.as_matrix()).collect();
    let mut total = 0.0;
    for (i, bei) in sandwiches.iter().enumerate() {
        for (j, bej) in sandwiches.iter().enumerate() {
            // Tr(B E_j B E_i)
            let tr = (bej * bei).trace().re;
            total += kernel.eval_unchecked(lambda[i], lambda[j]) * tr;
        }
    }
    Ok(total)
}

/// Second derivative of `t ↦ ‖A + tB‖_p²` at `t = 0` and the pieces it is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSqSecondDerivative {
    /// `ψ(0) = Tr |A|^p`
    pub psi: f64,
    /// `ψ′(0)`
    pub psi_first: f64,
    /// `ψ″(0)`
    pub psi_second: f64,
    /// `(2/p)ψ^{2/p−1}ψ″ + (2/p)(2/p−1)ψ^{2/p−2}ψ′²`
    pub value: f64,
    /// `(2/p)‖A‖_p^{2−p}ψ″`, which bounds `value` from below when `p ≤ 2`.
    pub lower_bound: f64,
}

/// Chain rule for `ψ(t)^{2/p}` with `ψ(t) = Tr |A + tB|^p`.
pub fn norm_sq_second_derivative(p: f64, a: &SelfAdjointMatrix, b: &SelfAdjointMatrix) -> Result<NormSqSecondDerivative> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::parameter("p", p, "must lie in (1, 2]"));
    }
    check_pair(a, b)?;
    let d = eigh(a, None)?;
    require_invertible(&d)?;
    let f = ScalarFunction::PowerAbs(p);
    let psi = trace_value_of(&f, &d)?;
    let psi_first = trace_first_derivative(&f, a, b)?;
    let psi_second = trace_second_derivative_of(&f, &d, b)?;
    let e = 2.0 / p;
    let value = e * psi.powf(e - 1.0) * psi_second + e * (e - 1.0) * psi.powf(e - 2.0) * psi_first * psi_first;
    let norm = psi.powf(1.0 / p);
    let lower_bound = e * norm.powf(2.0 - p) * psi_second;
    Ok(NormSqSecondDerivative {
        psi,
        psi_first,
        psi_second,
        value,
        lower_bound,
    })
}

pub(crate) fn require_invertible(d: &SpectralDecomposition) -> Result<()> {
    let m = d.min_abs_eigenvalue();
    if m < Tolerances::DEFAULT.invertibility {
        return Err(Error::Precondition(format!(
            "matrix is numerically singular (min |eigenvalue| = {m:.3e})"
        )));
    }
    Ok(())
}

pub(crate) fn require_positive_definite(name: &str, d: &SpectralDecomposition) -> Result<()> {
    if d.min_eigenvalue() <= 0.0 {
        return Err(Error::Precondition(format!(
            "{name} is not positive definite (min eigenvalue {:.3e})",
            d.min_eigenvalue()
        )));
    }
    Ok(())
}

/// `I_f^θ(A, B, X) = Σ_{j,k} [f(λ_j/μ_k) μ_k]^{−θ} Tr(X* E_j X E_k)` for positive definite `A`, `B`.
pub fn quasi_entropy(
    f: &ScalarFunction,
    theta: f64,
    a: &SelfAdjointMatrix,
    b: &SelfAdjointMatrix,
    x: &ComplexMatrix,
) -> Result<f64> {
    let da = eigh(a, None)?;
    let db = eigh(b, None)?;
    require_positive_definite("A", &da)?;
    require_positive_definite("B", &db)?;
    x.ensure_same_shape(a.as_matrix())?;
    let kernel = Kernel2::QuasiEntropy { f: f.clone(), theta };
    let w = kernel.grid(da.eigenvalues(), db.eigenvalues())?;
    let mut total = 0.0;
    for (j, ej) in da.projections().iter().enumerate() {
        let left = ej.as_matrix() * x;
        for (k, ek) in db.projections().iter().enumerate() {
            let block = &left * ek.as_matrix();
            total += w[j][k] * block.frobenius_norm().powi(2);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divdiff::{div_diff2, kernel_fp, kernel_from_ratio};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> SelfAdjointMatrix {
        SelfAdjointMatrix::hermitize(&random_matrix(n, rng))
    }

    fn random_pd(n: usize, rng: &mut ChaCha8Rng) -> SelfAdjointMatrix {
        let g = random_matrix(n, rng);
        SelfAdjointMatrix::hermitize(&(&(&g * &g.adjoint()) + &ComplexMatrix::identity(n).scale_real(0.05)))
    }

    /// Σ_{j,k} F(λ_j, μ_k) E_j X E_k straight from the projections.
    fn q_direct(k: &Kernel2, a: &SelfAdjointMatrix, b: &SelfAdjointMatrix, x: &ComplexMatrix) -> ComplexMatrix {
        let da = eigh(a, None).unwrap();
        let db = eigh(b, None).unwrap();
        let mut out = ComplexMatrix::zeros(a.dim(), b.dim());
        for (j, ej) in da.projections().iter().enumerate() {
            for (l, el) in db.projections().iter().enumerate() {
                let w = k.eval(da.eigenvalues()[j], db.eigenvalues()[l]).unwrap();
                out = &out + &(&(ej.as_matrix() * x) * el.as_matrix()).scale_real(w);
            }
        }
        out
    }

    /// Unreduced triple sum 2 Σ f^[2](λ_i, λ_j, λ_k) Tr(E_i B E_j B E_k).
    fn second_derivative_triple(f: &ScalarFunction, a: &SelfAdjointMatrix, b: &SelfAdjointMatrix) -> f64 {
        let d = eigh(a, None).unwrap();
        let lam = d.eigenvalues();
        let e = d.projections();
        let mut total = 0.0;
        for i in 0..lam.len() {
            for j in 0..lam.len() {
                for k in 0..lam.len() {
                    let m = &(&(&(&(e[i].as_matrix() * b.as_matrix()) * e[j].as_matrix()) * b.as_matrix()) * e[k].as_matrix());
                    total += 2.0 * div_diff2(f, lam[i], lam[j], lam[k]).unwrap() * m.trace().re;
                }
            }
        }
        total
    }

    #[test]
    fn q_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_matrix(3, &mut rng);
        let a = random_hermitian(3, &mut rng);
        let b = random_hermitian(3, &mut rng);
        let y = q_apply(&Kernel2::Constant(1.0), &a, &b, &x).unwrap();
        assert!((&y - &x).frobenius_norm() < 1e-12);

        let i3 = SelfAdjointMatrix::identity(3);
        let y = q_apply(&Kernel2::Fp(1.5), &i3, &i3, &x).unwrap();
        assert!((&y - &x.scale_real(0.75)).frobenius_norm() < 1e-14);

        let d = SelfAdjointMatrix::from_diag(&[1.0, 4.0]);
        let x = random_matrix(2, &mut rng);
        let y = q_apply(&Kernel2::Fp(1.5), &d, &d, &x).unwrap();
        let w = [[0.75, kernel_fp(1.5, 1.0, 4.0).unwrap()], [kernel_fp(1.5, 4.0, 1.0).unwrap(), kernel_fp(1.5, 4.0, 4.0).unwrap()]];
        for r in 0..2 {
            for c in 0..2 {
                assert!((y[(r, c)] - x[(r, c)] * w[r][c]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn q_matches_projection_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 2..6 {
            let a = random_pd(n, &mut rng);
            let b = random_pd(n, &mut rng);
            let x = random_matrix(n, &mut rng);
            for k in [Kernel2::Fp(1.4), Kernel2::log_div_diff(), kernel_from_ratio(ScalarFunction::HLog)] {
                let fast = q_apply(&k, &a, &b, &x).unwrap();
                let slow = q_direct(&k, &a, &b, &x);
                assert!((&fast - &slow).frobenius_norm() <= 1e-10 * slow.frobenius_norm().max(1.0));
            }
        }
    }

    #[test]
    fn q_linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..200 {
            let n = 2 + k % 4;
            let a = random_pd(n, &mut rng);
            let b = random_pd(n, &mut rng);
            let q = QOperator::new(&Kernel2::power_div_diff(0.4), &a, &b).unwrap();
            let x = random_matrix(n, &mut rng);
            let y = random_matrix(n, &mut rng);
            let s = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let lhs = q.apply(&(&x.scale(s) + &y)).unwrap();
            let rhs = &q.apply(&x).unwrap().scale(s) + &q.apply(&y).unwrap();
            assert!((&lhs - &rhs).frobenius_norm() <= 1e-10 * lhs.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn reciprocal_kernels_invert() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 2..6 {
            let a = random_pd(n, &mut rng);
            let b = random_pd(n, &mut rng);
            let x = random_matrix(n, &mut rng);
            let g1 = q_apply(&Kernel2::log_div_diff(), &a, &b, &x).unwrap();
            let back = q_apply(&kernel_from_ratio(ScalarFunction::HLog), &a, &b, &g1).unwrap();
            assert!((&back - &x).frobenius_norm() <= 1e-9 * x.frobenius_norm());
            let k = Kernel2::Fp(1.3);
            let inv = q_apply(&k.clone().reciprocal(), &a, &b, &q_apply(&k, &a, &b, &x).unwrap()).unwrap();
            assert!((&inv - &x).frobenius_norm() <= 1e-9 * x.frobenius_norm());
        }
    }

    #[test]
    fn quad_form_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_hermitian(3, &mut rng);
        let x = random_matrix(3, &mut rng);
        let v = quad_form(&Kernel2::Constant(1.0), &a, &a, &x).unwrap();
        assert!((v - x.frobenius_norm().powi(2)).abs() < 1e-12);
        let pd = random_pd(3, &mut rng);
        assert_eq!(quad_form(&Kernel2::Fp(1.5), &pd, &pd, &ComplexMatrix::zeros(3, 3)).unwrap(), 0.0);
        let d = SelfAdjointMatrix::from_diag(&[1.0, 4.0]);
        let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let v = quad_form(&Kernel2::Fp(1.5), &d, &d, &swap).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn quad_form_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for k in 0..100 {
            let n = 2 + k % 4;
            let a = random_pd(n, &mut rng);
            let b = random_hermitian(n, &mut rng);
            assert!(quad_form(&Kernel2::Fp(1.2 + 0.007 * k as f64), &a, &a, &b).unwrap() > 0.0);
        }
    }

    #[test]
    fn domain_errors() {
        let indefinite = SelfAdjointMatrix::from_diag(&[-1.0, 2.0]);
        let x = ComplexMatrix::identity(2);
        assert!(matches!(q_apply(&Kernel2::Fp(1.5), &indefinite, &indefinite, &x), Err(Error::Domain { .. })));
        let singular = SelfAdjointMatrix::from_diag(&[0.0, 2.0]);
        assert!(matches!(
            trace_second_derivative(&ScalarFunction::PowerAbs(1.5), &singular, &indefinite),
            Err(Error::Domain { .. })
        ));
        assert!(q_apply(&Kernel2::Constant(1.0), &indefinite, &indefinite, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn second_derivative_examples() {
        let b = SelfAdjointMatrix::from_diag(&[1.0, 2.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_hermitian(2, &mut rng);
        let v = trace_second_derivative(&ScalarFunction::Square, &a, &b).unwrap();
        assert!((v - 10.0).abs() < 1e-12);

        let a = SelfAdjointMatrix::from_diag(&[1.0, 4.0]);
        let v = trace_second_derivative(&ScalarFunction::PowerAbs(1.5), &a, &SelfAdjointMatrix::identity(2)).unwrap();
        assert!((v - 1.125).abs() < 1e-14);
    }

    #[test]
    fn reduced_sum_matches_triple_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 2..5 {
            let a = random_hermitian(n, &mut rng);
            let b = random_hermitian(n, &mut rng);
            for f in [ScalarFunction::PowerAbs(1.5), ScalarFunction::PowerAbs(2.5), ScalarFunction::Square] {
                let reduced = trace_second_derivative(&f, &a, &b).unwrap();
                let triple = second_derivative_triple(&f, &a, &b);
                assert!((reduced - triple).abs() <= 1e-8 * reduced.abs().max(1.0), "{f:?}");
            }
        }
    }

    #[test]
    fn kernel_identity_on_positive_definite_a() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in 0..100 {
            let n = 2 + k % 4;
            let a = random_pd(n, &mut rng);
            let b = random_hermitian(n, &mut rng);
            let p = [1.2, 1.5, 1.8, 2.0][k % 4];
            let lhs = trace_second_derivative(&ScalarFunction::PowerAbs(p), &a, &b).unwrap();
            let rhs = quad_form(&Kernel2::Fp(p), &a, &a, b.as_matrix()).unwrap();
            assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn first_derivative_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = random_hermitian(3, &mut rng);
        let b = random_hermitian(3, &mut rng);
        let v = trace_first_derivative(&ScalarFunction::Square, &a, &b).unwrap();
        assert!((v - 2.0 * (a.as_matrix() * b.as_matrix()).trace().re).abs() < 1e-12);
        let a = SelfAdjointMatrix::from_diag(&[1.0, 4.0]);
        let v = trace_first_derivative(&ScalarFunction::PowerAbs(1.5), &a, &SelfAdjointMatrix::from_diag(&[1.0, 0.0])).unwrap();
        assert!((v - 1.5).abs() < 1e-14);
        assert_eq!(trace_first_derivative(&ScalarFunction::PowerAbs(1.5), &a, &SelfAdjointMatrix::zeros(2)).unwrap(), 0.0);
    }

    #[test]
    fn norm_sq_examples() {
        for &p in &[1.1, 1.5, 2.0] {
            let one = SelfAdjointMatrix::identity(1);
            let r = norm_sq_second_derivative(p, &one, &one).unwrap();
            assert!((r.value - 2.0).abs() < 1e-12);
        }
        // ψ(t) = (1+t)^{1.5} + (1−t)^{1.5}; d²/dt² ψ^{4/3} at 0 by scalar calculus.
        let r = norm_sq_second_derivative(1.5, &SelfAdjointMatrix::identity(2), &SelfAdjointMatrix::from_diag(&[1.0, -1.0])).unwrap();
        let (psi, psi1, psi2): (f64, f64, f64) = (2.0, 0.0, 2.0 * 0.75);
        let expected = (4.0 / 3.0) * psi.powf(1.0 / 3.0) * psi2 + (4.0 / 9.0) * psi.powf(-2.0 / 3.0) * psi1 * psi1;
        assert!((r.value - expected).abs() < 1e-13);
        let scalar = |t: f64| ((1.0 + t).powf(1.5) + (1.0 - t).powf(1.5)).powf(4.0 / 3.0);
        let h = 1e-3;
        let fd = (scalar(h) - 2.0 * scalar(0.0) + scalar(-h)) / (h * h);
        assert!((r.value - fd).abs() < 1e-5);

        assert!(norm_sq_second_derivative(2.5, &SelfAdjointMatrix::identity(2), &SelfAdjointMatrix::identity(2)).is_err());
        assert!(matches!(
            norm_sq_second_derivative(1.5, &SelfAdjointMatrix::from_diag(&[0.0, 1.0]), &SelfAdjointMatrix::identity(2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn norm_sq_lower_bound_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 0..100 {
            let n = 2 + k % 4;
            let a = random_hermitian(n, &mut rng);
            let b = random_hermitian(n, &mut rng);
            let r = norm_sq_second_derivative(1.2 + 0.008 * k as f64, &a, &b).unwrap();
            assert!(r.value >= r.lower_bound - 1e-12 * r.value.abs().max(1.0));
        }
    }

    #[test]
    fn quasi_entropy_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x = random_matrix(3, &mut rng);
        let i3 = SelfAdjointMatrix::identity(3);
        let fro = x.frobenius_norm().powi(2);
        for theta in [1.0, 0.5] {
            let v = quasi_entropy(&ScalarFunction::Identity, theta, &i3, &i3, &x).unwrap();
            assert!((v - fro).abs() < 1e-12);
        }
        let d = SelfAdjointMatrix::from_diag(&[1.0, 4.0]);
        let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let v = quasi_entropy(&ScalarFunction::GAlpha(0.5), 0.5, &d, &d, &swap).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-13);
        assert!(matches!(
            quasi_entropy(&ScalarFunction::HLog, 1.0, &SelfAdjointMatrix::from_diag(&[-1.0, 1.0]), &d, &swap),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn quasi_entropy_matches_power_div_diff_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for k in 0..100 {
            let n = 2 + k % 3;
            let alpha = [0.25, 0.5, 0.75][k % 3];
            let a = random_pd(n, &mut rng);
            let b = random_pd(n, &mut rng);
            let x = random_matrix(n, &mut rng);
            let qe = quasi_entropy(&ScalarFunction::GAlpha(alpha), 1.0 - alpha, &a, &b, &x).unwrap();
            let qf = quad_form(&Kernel2::power_div_diff(alpha), &a, &b, &x).unwrap();
            assert!((qe - qf).abs() <= 1e-9 * qf.max(1.0));
        }
    }
}
