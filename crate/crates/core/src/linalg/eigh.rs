//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! clustered spectral decomposition `M = Σ λ_i E_i` built on top of it.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, SelfAdjointMatrix, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// Eigenvalues (ascending) and orthonormal eigenvectors stored as matrix columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Cyclic Jacobi on a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation to the resulting
/// 2×2 block. Stops once the off-diagonal Frobenius mass drops below
/// `tol.jacobi_off_diagonal · ‖M‖_F`.
pub fn jacobi_eigen(m: &SelfAdjointMatrix, tol: &Tolerances) -> Result<Eigen> {
    let n = m.dim();
    let mut a = m.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let target = tol.jacobi_off_diagonal * a.frobenius_norm();

    let mut sweeps = 0;
    let mut off = off_diagonal_mass(&a);
    while off > target {
        if sweeps == tol.jacobi_max_sweeps {
            return Err(Error::Convergence {
                sweeps,
                off_diagonal: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_mass(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Eigen { values, vectors })
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase_conj = (apq / r).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let zeta = (aqq - app) / (2.0 * r);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + zeta.hypot(1.0))
    } else {
        -1.0 / (-zeta + zeta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]] restricted to the (p, q) plane.
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = phase_conj * (-s);
    let g_qq = phase_conj * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// `M = Σ_i λ_i E_i` with distinct `λ_i` (ascending) and orthogonal projections `E_i`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    projections: Vec<SelfAdjointMatrix>,
    cluster_tolerance: f64,
    raw_eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
    cluster_of: Vec<usize>,
}

/// Default merge radius: `1e-8 · max(1, spectral radius)`.
pub fn default_cluster_tolerance(eigenvalues: &[f64]) -> f64 {
    let radius = eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    Tolerances::DEFAULT.cluster_relative * radius.max(1.0)
}

/// Spectral decomposition of a self-adjoint matrix.
///
/// Eigenvalues within `cluster_tolerance` of their ascending neighbour are
/// merged into one projection whose eigenvalue is the cluster mean. `None`
/// selects [`default_cluster_tolerance`].
pub fn eigh(m: &SelfAdjointMatrix, cluster_tolerance: Option<f64>) -> Result<SpectralDecomposition> {
    eigh_with(m, cluster_tolerance, &Tolerances::DEFAULT)
}

pub fn eigh_with(
    m: &SelfAdjointMatrix,
    cluster_tolerance: Option<f64>,
    tol: &Tolerances,
) -> Result<SpectralDecomposition> {
    if let Some(ct) = cluster_tolerance {
        if !(ct >= 0.0) {
            return Err(Error::parameter("cluster_tolerance", ct, "must be non-negative"));
        }
    }
    let Eigen { values, vectors } = jacobi_eigen(m, tol)?;
    let cluster_tolerance = cluster_tolerance.unwrap_or_else(|| default_cluster_tolerance(&values));
    let n = values.len();

    let mut cluster_of = Vec::with_capacity(n);
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (i, &lam) in values.iter().enumerate() {
        if i > 0 && lam - values[i - 1] <= cluster_tolerance {
            members.last_mut().expect("cluster exists").push(i);
        } else {
            members.push(vec![i]);
        }
        cluster_of.push(members.len() - 1);
    }

    let eigenvalues = members
        .iter()
        .map(|idx| idx.iter().map(|&i| values[i]).sum::<f64>() / idx.len() as f64)
        .collect();
    let projections = members
        .iter()
        .map(|idx| {
            let p = ComplexMatrix::from_fn(n, n, |r, c| {
                idx.iter().map(|&k| vectors[(r, k)] * vectors[(c, k)].conj()).sum()
            });
            SelfAdjointMatrix::hermitize(&p)
        })
        .collect();

    Ok(SpectralDecomposition {
        eigenvalues,
        projections,
        cluster_tolerance,
        raw_eigenvalues: values,
        eigenvectors: vectors,
        cluster_of,
    })
}

/// [`eigh`] for an unchecked matrix: rejects non-square and non-self-adjoint input.
pub fn eigh_matrix(m: &ComplexMatrix, cluster_tolerance: Option<f64>) -> Result<SpectralDecomposition> {
    let sa = SelfAdjointMatrix::new(m.clone())?;
    eigh(&sa, cluster_tolerance)
}

impl SpectralDecomposition {
    /// Same projections with every eigenvalue replaced by `f(λ)`. Ascending order is not kept.
    pub(crate) fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> SpectralDecomposition {
        SpectralDecomposition {
            eigenvalues: self.eigenvalues.iter().map(|&x| f(x)).collect(),
            raw_eigenvalues: self.raw_eigenvalues.iter().map(|&x| f(x)).collect(),
            ..self.clone()
        }
    }

    pub fn dim(&self) -> usize {
        self.raw_eigenvalues.len()
    }

    /// Distinct eigenvalues after clustering, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projections(&self) -> &[SelfAdjointMatrix] {
        &self.projections
    }

    pub fn cluster_tolerance(&self) -> f64 {
        self.cluster_tolerance
    }

    /// One eigenvalue per eigenvector (with multiplicity), before clustering.
    pub fn raw_eigenvalues(&self) -> &[f64] {
        &self.raw_eigenvalues
    }

    /// Unitary whose columns are the eigenvectors.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// Cluster index of each eigenvector.
    pub fn cluster_of(&self) -> &[usize] {
        &self.cluster_of
    }

    /// Cluster representative attached to eigenvector `k`.
    pub fn eigenvalue_of_vector(&self, k: usize) -> f64 {
        self.eigenvalues[self.cluster_of[k]]
    }

    pub fn min_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(f64::INFINITY, |acc, x| acc.min(x.abs()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// `V* X V`.
    pub fn to_eigenbasis(&self, x: &ComplexMatrix) -> ComplexMatrix {
        &self.eigenvectors.adjoint_mul(x) * &self.eigenvectors
    }

    /// `V Y V*`.
    pub fn from_eigenbasis(&self, y: &ComplexMatrix) -> ComplexMatrix {
        &(&self.eigenvectors * y) * &self.eigenvectors.adjoint()
    }

    /// `Σ_i f(λ_i) E_i` for a complex-valued `f`.
    pub fn apply(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.dim();
        let diag: Vec<Complex64> = (0..n).map(|k| f(self.eigenvalue_of_vector(k))).collect();
        let scaled = ComplexMatrix::from_fn(n, n, |r, c| self.eigenvectors[(r, c)] * diag[c]);
        &scaled * &self.eigenvectors.adjoint()
    }

    /// `Σ_i f(λ_i) E_i` for real `f`; the result is self-adjoint.
    pub fn apply_real(&self, f: impl Fn(f64) -> f64) -> SelfAdjointMatrix {
        SelfAdjointMatrix::hermitize(&self.apply(|x| Complex64::new(f(x), 0.0)))
    }

    /// `Σ_i λ_i E_i`.
    pub fn reconstruct(&self) -> SelfAdjointMatrix {
        self.apply_real(|x| x)
    }
}
