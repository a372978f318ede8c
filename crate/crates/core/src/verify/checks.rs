use serde::{Deserialize, Serialize};

use super::report::GapRecord;
use crate::channel::QuantumChannel;
use crate::divdiff::{second_sum, Kernel2, ScalarFunction};
use crate::error::{Error, Result};
use crate::linalg::{
    abs_matrix, eigh, matrix_function, schatten_norm, selfadjoint_embed, ComplexMatrix, SelfAdjointMatrix,
};
use crate::opint::{quad_form, require_invertible, require_positive_definite, trace_second_derivative,
    trace_second_derivative_of,
};

/// `(gap, normalizer)` of the norm inequality, reversed for `p > 2`.
pub fn bcl_gap(a: &ComplexMatrix, b: &ComplexMatrix, p: f64) -> Result<(f64, f64)> {
    if !(p > 1.0) {
        return Err(Error::parameter("p", p, "must exceed 1"));
    }
    a.ensure_same_shape(b)?;
    let sq = |m: &ComplexMatrix| schatten_norm(m, p).map(|v| v * v);
    let na = sq(a)?;
    let nb = sq(b)?;
    let raw = sq(&(a + b))? + sq(&(a - b))? - 2.0 * na - 2.0 * (p - 1.0) * nb;
    let gap = if p <= 2.0 { raw } else { -raw };
    Ok((gap, na + nb))
}

/// The norm inequality on `(A, B)` and on the self-adjoint embedded pair `(A′, B′)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BclGap {
    pub original: GapRecord,
    pub embedded: GapRecord,
}

pub fn check_bcl(a: &ComplexMatrix, b: &ComplexMatrix, p: f64) -> Result<BclGap> {
    let (gap, norm) = bcl_gap(a, b, p)?;
    let ea = selfadjoint_embed(a)?;
    let eb = selfadjoint_embed(b)?;
    let (egap, enorm) = bcl_gap(ea.as_matrix(), eb.as_matrix(), p)?;
    Ok(BclGap {
        original: GapRecord::new("bcl", p, gap, norm).with_dim(a.rows()),
        embedded: GapRecord::new("bcl.embedded", p, egap, enorm).with_dim(2 * a.rows()),
    })
}

/// The second-derivative inequality and the links of its proof chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyGap {
    /// `ψ″(A) − p(p−1)‖A‖_p^{p−2}‖B‖_p²`.
    pub main: GapRecord,
    /// `key.abs`, `key.pinch`, `key.holder`, `key.contraction`; they sum to `main`.
    pub links: Vec<GapRecord>,
}

/// `ψ″` is `d²/dt²|₀ Tr |A + tB|^p`. With `E` the pinching onto the algebra of `B`:
/// `ψ″(A) ≥ ψ″(|A|) ≥ ψ″(E|A|) = p(p−1)Tr(E|A|^{p−2}B²) ≥ p(p−1)‖E|A|‖_p^{p−2}‖B‖_p² ≥ p(p−1)‖A‖_p^{p−2}‖B‖_p²`.
pub fn check_key(a: &SelfAdjointMatrix, b: &SelfAdjointMatrix, p: f64) -> Result<KeyGap> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::parameter("p", p, "must lie in (1, 2]"));
    }
    if a.dim() != b.dim() {
        return Err(Error::dimension(a.dim(), b.dim()));
    }
    let d = eigh(a, None)?;
    require_invertible(&d)?;
    let f = ScalarFunction::PowerAbs(p);
    let c = p * (p - 1.0);
    let norm_a = schatten_norm(a.as_matrix(), p)?;
    let norm_b2 = schatten_norm(b.as_matrix(), p)?.powi(2);
    let rhs = c * norm_a.powf(p - 2.0) * norm_b2;
    let normalizer = norm_a.powf(p - 2.0) * norm_b2;

    let abs_a = abs_matrix(a.as_matrix())?;
    let pinched = QuantumChannel::pinching_of(b)?.apply_self_adjoint(&abs_a)?;
    let norm_e = schatten_norm(pinched.as_matrix(), p)?;

    // |A| shares the projections of A; re-diagonalizing it would add rounding to key.abs.
    let d_a = trace_second_derivative_of(&f, &d, b)?;
    let d_abs = trace_second_derivative_of(&f, &d.map_eigenvalues(f64::abs), b)?;
    let d_pinched = trace_second_derivative(&f, &pinched, b)?;
    let holder = c * norm_e.powf(p - 2.0) * norm_b2;

    let n = a.dim();
    let link = |name: &str, gap: f64| GapRecord::new(name, p, gap, normalizer).with_dim(n);
    Ok(KeyGap {
        main: link("key", d_a - rhs),
        links: vec![
            link("key.abs", d_a - d_abs),
            link("key.pinch", d_abs - d_pinched),
            link("key.holder", d_pinched - holder),
            link("key.contraction", holder - rhs),
        ],
    })
}

/// `[f^[2](r,s,r) + f^[2](s,r,s)] − [same at (|r|,|s|)]` for `f = |x|^p`.
/// Also requires `f^[2](r,r,r) = f^[2](|r|,|r|,|r|)` bit for bit.
pub fn check_fp_lemma(p: f64, r: f64, s: f64) -> Result<GapRecord> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::parameter("p", p, "must lie in (1, 2]"));
    }
    let f = ScalarFunction::PowerAbs(p);
    for x in [r, s] {
        let at = crate::divdiff::div_diff2(&f, x, x, x)?;
        let at_abs = crate::divdiff::div_diff2(&f, x.abs(), x.abs(), x.abs())?;
        if at != at_abs {
            return Err(Error::Internal(format!(
                "f^[2]({x},{x},{x}) = {at} differs from its value at |{x}| ({at_abs})"
            )));
        }
    }
    let signed = second_sum(&f, r, s)?;
    let absolute = second_sum(&f, r.abs(), s.abs())?;
    Ok(GapRecord::new("fp", p, signed - absolute, absolute).with_dim(1))
}

/// Kernels whose quadratic forms contract under unital channels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneKernel {
    /// `f_α^[1]` for `f_α(x) = x^α`.
    FAlpha1(f64),
    /// `g^[1]` for `g = log`.
    LogG1,
    /// `[h(x/y)y]^{−θ}` with `h(x) = (x − 1)/log x`.
    QuasiH(f64),
}

impl MonotoneKernel {
    pub fn kernel(self) -> Kernel2 {
        match self {
            MonotoneKernel::FAlpha1(a) => Kernel2::power_div_diff(a),
            MonotoneKernel::LogG1 => Kernel2::log_div_diff(),
            MonotoneKernel::QuasiH(theta) => Kernel2::QuasiEntropy {
                f: ScalarFunction::HLog,
                theta,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonotoneKernel::FAlpha1(_) => "monotone.f_alpha",
            MonotoneKernel::LogG1 => "monotone.log",
            MonotoneKernel::QuasiH(_) => "monotone.quasi_h",
        }
    }

    fn param(self) -> f64 {
        match self {
            MonotoneKernel::FAlpha1(a) | MonotoneKernel::QuasiH(a) => a,
            MonotoneKernel::LogG1 => 0.0,
        }
    }
}

/// `⟨X, Q^{A,B}(X)⟩ − ⟨β(X), Q^{β(A),β(B)}(β(X))⟩`, normalized by the first term.
pub fn check_monotonicity(
    kernel: MonotoneKernel,
    a: &SelfAdjointMatrix,
    b: &SelfAdjointMatrix,
    x: &ComplexMatrix,
    channel: &QuantumChannel,
) -> Result<GapRecord> {
    let report = channel.validate();
    if !report.passed {
        return Err(Error::Precondition(format!("channel is not unital and trace preserving: {report:?}")));
    }
    require_positive_definite("A", &eigh(a, None)?)?;
    require_positive_definite("B", &eigh(b, None)?)?;
    let ba = channel.apply_self_adjoint(a)?;
    let bb = channel.apply_self_adjoint(b)?;
    if eigh(&ba, None)?.min_eigenvalue() <= 0.0 || eigh(&bb, None)?.min_eigenvalue() <= 0.0 {
        return Err(Error::Internal("channel image of a positive definite matrix is not positive definite".into()));
    }
    let bx = channel.apply(x, false)?;
    let k = kernel.kernel();
    let before = quad_form(&k, a, b, x)?;
    let after = quad_form(&k, &ba, &bb, &bx)?;
    Ok(GapRecord::new(kernel.name(), kernel.param(), before - after, before).with_dim(a.dim()))
}

/// One `(A, B, X)` argument of the quadratic form.
#[derive(Debug, Clone, PartialEq)]
pub struct Triple {
    pub a: SelfAdjointMatrix,
    pub b: SelfAdjointMatrix,
    pub x: ComplexMatrix,
}

/// `½[Φ(T₁) + Φ(T₂)] − Φ(½T₁ + ½T₂)` with `Φ = ⟨X, Q_{f_α^[1]}^{A,B}(X)⟩`.
pub fn check_midpoint_convexity(alpha: f64, t1: &Triple, t2: &Triple) -> Result<GapRecord> {
    crate::divdiff::special::check_alpha(alpha)?;
    let k = Kernel2::power_div_diff(alpha);
    for t in [t1, t2] {
        require_positive_definite("A", &eigh(&t.a, None)?)?;
        require_positive_definite("B", &eigh(&t.b, None)?)?;
    }
    let phi1 = quad_form(&k, &t1.a, &t1.b, &t1.x)?;
    let phi2 = quad_form(&k, &t2.a, &t2.b, &t2.x)?;
    let ma = t1.a.scale(0.5).add_scaled(0.5, &t2.a);
    let mb = t1.b.scale(0.5).add_scaled(0.5, &t2.b);
    let mx = (&t1.x + &t2.x).scale_real(0.5);
    let mid = quad_form(&k, &ma, &mb, &mx)?;
    let avg = 0.5 * (phi1 + phi2);
    Ok(GapRecord::new("convexity", alpha, avg - mid, avg).with_dim(t1.a.dim()))
}

/// Minimum eigenvalue of `f(B) − f(A)`; `B − A` is expected to be positive semidefinite.
pub fn operator_monotone_gap(f: &ScalarFunction, a: &SelfAdjointMatrix, b: &SelfAdjointMatrix) -> Result<f64> {
    let fa = matrix_function(f, a)?;
    let fb = matrix_function(f, b)?;
    let diff = SelfAdjointMatrix::hermitize(&(fb.as_matrix() - fa.as_matrix()));
    Ok(eigh(&diff, Some(0.0))?.min_eigenvalue())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{check_operator_monotone, sample_matrix, Ensemble, TrialConfig};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ginibre(n: usize, seed: u64) -> ComplexMatrix {
        sample_matrix(Ensemble::ComplexGinibre, n, seed)
    }

    fn pd(n: usize, seed: u64) -> SelfAdjointMatrix {
        SelfAdjointMatrix::hermitize(&sample_matrix(Ensemble::PositiveDefinite, n, seed))
    }

    fn sa(n: usize, seed: u64) -> SelfAdjointMatrix {
        SelfAdjointMatrix::hermitize(&sample_matrix(Ensemble::SelfAdjoint, n, seed))
    }

    #[test]
    fn bcl_examples() {
        for seed in 0..20 {
            let r = check_bcl(&ginibre(3, seed), &ginibre(3, seed + 100), 2.0).unwrap();
            assert!(r.original.gap.abs() < 1e-10 * r.original.normalizer);
        }
        let a = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let b = ComplexMatrix::from_diag(&[0.0, 1.0]);
        let r = check_bcl(&a, &b, 1.5).unwrap();
        assert!((r.original.gap - (2f64.powf(7.0 / 3.0) - 3.0)).abs() < 1e-12);
        let r = check_bcl(&ginibre(3, 1), &ComplexMatrix::zeros(3, 3), 1.5).unwrap();
        assert!(r.original.gap.abs() < 1e-12);
        assert!(check_bcl(&a, &b, 1.0).is_err());
        assert!(check_bcl(&a, &ComplexMatrix::identity(3), 1.5).is_err());
    }

    #[test]
    fn bcl_embedding_consistency() {
        for seed in 0..50 {
            let p = 1.1 + 0.05 * (seed % 20) as f64;
            let r = check_bcl(&ginibre(3, seed), &ginibre(3, seed + 1000), p).unwrap();
            let s = 2f64.powf(2.0 / p);
            assert!((r.embedded.gap - s * r.original.gap).abs() <= 1e-9 * r.embedded.normalizer);
            assert!((r.embedded.normalized_gap - r.original.normalized_gap).abs() <= 1e-9);
            assert!(r.original.normalized_gap >= -1e-9);
        }
    }

    #[test]
    fn key_examples() {
        let a = SelfAdjointMatrix::from_diag(&[1.0, 4.0]);
        let r = check_key(&a, &SelfAdjointMatrix::identity(2), 1.5).unwrap();
        let norm = (1.0f64 + 8.0).powf(1.0 / 1.5);
        let rhs = 0.75 * norm.powf(-0.5) * 2f64.powf(2.0 / 1.5);
        assert!((rhs - 0.9087).abs() < 5e-4);
        assert!((r.main.gap - (1.125 - rhs)).abs() < 1e-12);
        let sum: f64 = r.links.iter().map(|l| l.gap).sum();
        assert!((sum - r.main.gap).abs() < 1e-12);

        let r = check_key(&a, &SelfAdjointMatrix::zeros(2), 1.5).unwrap();
        assert_eq!(r.main.gap, 0.0);

        for n in 1..5 {
            let r = check_key(&SelfAdjointMatrix::identity(n), &SelfAdjointMatrix::identity(n), 1.3).unwrap();
            assert!(r.main.gap.abs() < 1e-10 * r.main.normalizer);
        }
        assert!(matches!(
            check_key(&SelfAdjointMatrix::from_diag(&[1e-8, 1.0]), &a, 1.5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn key_chain_is_monotone() {
        for seed in 0..60 {
            let n = 2 + (seed % 4) as usize;
            let a = if seed % 2 == 0 {
                pd(n, seed)
            } else {
                super::super::sample_indefinite_invertible(n, seed, 1e-2).unwrap()
            };
            let b = sa(n, seed + 500);
            let r = check_key(&a, &b, 1.2 + 0.01 * seed as f64).unwrap();
            assert!(r.main.normalized_gap >= -1e-9);
            for l in &r.links {
                assert!(l.normalized_gap >= -1e-9, "{} {}", l.check, l.normalized_gap);
            }
        }
    }

    #[test]
    fn fp_examples() {
        let r = check_fp_lemma(1.5, 1.0, -1.0).unwrap();
        assert!((r.gap - 0.75).abs() < 1e-12);
        assert_eq!(check_fp_lemma(1.5, 0.7, 2.5).unwrap().gap, 0.0);
        assert!(check_fp_lemma(1.5, -2.0, -3.0).unwrap().gap.abs() < 1e-15);
        assert!(matches!(check_fp_lemma(1.5, 0.0, 1.0), Err(Error::Domain { .. })));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let r: f64 = rng.random_range(-3.0..3.0);
            let s: f64 = rng.random_range(-3.0..3.0);
            let p = rng.random_range(1.01..2.0);
            assert!(check_fp_lemma(p, r, s).unwrap().normalized_gap >= -1e-10);
        }
    }

    #[test]
    fn monotonicity_examples() {
        let a = pd(3, 1);
        let b = pd(3, 2);
        let x = ginibre(3, 3);
        for k in [MonotoneKernel::FAlpha1(0.5), MonotoneKernel::LogG1, MonotoneKernel::QuasiH(0.5)] {
            let r = check_monotonicity(k, &a, &b, &x, &QuantumChannel::identity(3)).unwrap();
            assert!(r.gap.abs() <= 1e-10 * r.normalizer);
            let pinch = QuantumChannel::pinching_of(&sa(3, 4)).unwrap();
            assert!(check_monotonicity(k, &a, &a, &x, &pinch).unwrap().normalized_gap >= -1e-9);
            let mix = QuantumChannel::unitary_mixture(3, 4, 5).unwrap();
            let id = SelfAdjointMatrix::identity(3);
            let r = check_monotonicity(k, &id, &id, &ComplexMatrix::identity(3), &mix).unwrap();
            assert!(r.gap.abs() < 1e-10);
        }
        let bad = QuantumChannel::new(vec![ComplexMatrix::identity(3).scale_real(0.5)]).unwrap();
        assert!(matches!(
            check_monotonicity(MonotoneKernel::LogG1, &a, &b, &x, &bad),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn monotonicity_random() {
        for seed in 0..100 {
            let a = pd(3, seed);
            let b = pd(3, seed + 1000);
            let x = ginibre(3, seed + 2000);
            let ch = if seed % 2 == 0 {
                QuantumChannel::unitary_mixture(3, 4, seed).unwrap()
            } else {
                QuantumChannel::pinching_of(&sa(3, seed + 3000)).unwrap()
            };
            for k in [MonotoneKernel::FAlpha1(0.25), MonotoneKernel::LogG1, MonotoneKernel::QuasiH(0.75)] {
                let r = check_monotonicity(k, &a, &b, &x, &ch).unwrap();
                assert!(r.normalized_gap >= -1e-9, "{k:?} {}", r.normalized_gap);
            }
        }
    }

    #[test]
    fn convexity_examples() {
        let t = Triple {
            a: pd(3, 1),
            b: pd(3, 2),
            x: ginibre(3, 3),
        };
        assert!(check_midpoint_convexity(0.5, &t, &t).unwrap().gap.abs() < 1e-12);
        let doubled = Triple {
            a: t.a.scale(2.0),
            b: t.b.scale(2.0),
            x: t.x.clone(),
        };
        assert!(check_midpoint_convexity(0.5, &t, &doubled).unwrap().gap >= 0.0);

        // 1×1: Φ(a, b, x) = |x|² (a^α − b^α)/(a − b); midpoint value by hand.
        let phi = |a: f64, b: f64, x: f64| x * x * (a.powf(0.5) - b.powf(0.5)) / (a - b);
        let one = |a: f64, b: f64, x: f64| Triple {
            a: SelfAdjointMatrix::from_diag(&[a]),
            b: SelfAdjointMatrix::from_diag(&[b]),
            x: ComplexMatrix::from_vec(1, 1, vec![Complex64::new(x, 0.0)]).unwrap(),
        };
        let r = check_midpoint_convexity(0.5, &one(1.0, 2.0, 1.0), &one(3.0, 5.0, 2.0)).unwrap();
        let expected = 0.5 * (phi(1.0, 2.0, 1.0) + phi(3.0, 5.0, 2.0)) - phi(2.0, 3.5, 1.5);
        assert!((r.gap - expected).abs() < 1e-12);
        assert!(r.gap > 0.0);
    }

    #[test]
    fn operator_monotone_examples() {
        let a = SelfAdjointMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let b = SelfAdjointMatrix::from_real_rows(&[&[3.0, 1.0], &[1.0, 1.0]]).unwrap();
        let g = operator_monotone_gap(&ScalarFunction::Square, &a, &b).unwrap();
        let expected = (5.0 - 29f64.sqrt()) / 2.0;
        assert!((g - expected).abs() < 1e-12);
        assert!(operator_monotone_gap(&ScalarFunction::Identity, &a, &b).unwrap().abs() < 1e-12);
        let cfg = TrialConfig {
            dim: 3,
            min_dim: Some(2),
            trials: 200,
            ..TrialConfig::default()
        };
        assert!(check_operator_monotone(&ScalarFunction::GAlpha(0.5), &cfg).unwrap().passed());
        let sq = check_operator_monotone(&ScalarFunction::Square, &cfg).unwrap();
        assert!(sq.violation_count() > 0);
        assert_eq!(sq.violations.len(), sq.violation_count());
    }
}
