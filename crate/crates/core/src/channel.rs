//! Unital trace-preserving channels in Kraus form.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, matrix_function_complex, ComplexMatrix, SelfAdjointMatrix};
use crate::tolerance::Tolerances;

/// `X ↦ Σ K_i X K_i*`. For unitary mixtures `K_i = √α_i U_i` and `weights` holds the `α_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumChannel {
    kraus: Vec<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

/// Residuals from [`QuantumChannel::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    /// `‖Σ K_i* K_i − I‖_F`
    pub trace_preservation: f64,
    /// `‖Σ K_i K_i* − I‖_F`
    pub unitality: f64,
    /// `max_i ‖U_i* U_i − I‖_F` for unitary mixtures, else 0.
    pub unitarity: f64,
    /// `|Σ α_i − 1|`, 0 without weights.
    pub weight_sum: f64,
    pub passed: bool,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::build(kraus, None)
    }

    /// `X ↦ Σ α_i U_i X U_i*`.
    pub fn from_unitaries(unitaries: Vec<ComplexMatrix>, weights: Vec<f64>) -> Result<Self> {
        if unitaries.len() != weights.len() {
            return Err(Error::dimension(unitaries.len(), weights.len()));
        }
        if let Some(&w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::parameter("weight", w, "must be positive"));
        }
        let kraus = unitaries.iter().zip(&weights).map(|(u, w)| u.scale_real(w.sqrt())).collect();
        Self::build(kraus, Some(weights))
    }

    fn build(kraus: Vec<ComplexMatrix>, weights: Option<Vec<f64>>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::Precondition("channel needs at least one Kraus operator".into()))?;
        let n = first.ensure_square()?;
        for k in &kraus {
            if k.ensure_square()? != n {
                return Err(Error::dimension(n, k.rows()));
            }
        }
        Ok(Self { kraus, weights })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(n)],
            weights: Some(vec![1.0]),
        }
    }

    /// Pinching onto the algebra generated by `b`: Kraus operators are its spectral projections.
    pub fn pinching_of(b: &SelfAdjointMatrix) -> Result<Self> {
        let d = eigh(b, None)?;
        Self::build(d.projections().iter().map(|e| e.as_matrix().clone()).collect(), None)
    }

    /// `m` unitaries `exp(iH)` with `H` the Hermitian part of a Ginibre draw scaled by `1/√n`,
    /// weights uniform on `(0.1, 1)` then normalized.
    pub fn unitary_mixture(n: usize, m: usize, seed: u64) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Precondition("unitary mixture needs n >= 1 and m >= 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = 1.0 / (n as f64).sqrt();
        let mut unitaries = Vec::with_capacity(m);
        for _ in 0..m {
            let g = ComplexMatrix::from_fn(n, n, |_, _| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * scale
            });
            let h = SelfAdjointMatrix::hermitize(&g);
            unitaries.push(matrix_function_complex(|x| Complex64::new(0.0, x).exp(), &h)?);
        }
        let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        Self::from_unitaries(unitaries, raw.iter().map(|w| w / total).collect())
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].rows()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Forward `Σ K X K*`, or the adjoint `Σ K* X K`.
    pub fn apply(&self, x: &ComplexMatrix, adjoint: bool) -> Result<ComplexMatrix> {
        if x.rows() != self.dim() || x.cols() != self.dim() {
            return Err(Error::dimension(self.dim(), format!("{}x{}", x.rows(), x.cols())));
        }
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for k in &self.kraus {
            let term = if adjoint {
                &k.adjoint_mul(x) * k
            } else {
                &(k * x) * &k.adjoint()
            };
            out = &out + &term;
        }
        Ok(out)
    }

    /// Forward application to a self-adjoint input, re-symmetrized against rounding.
    pub fn apply_self_adjoint(&self, x: &SelfAdjointMatrix) -> Result<SelfAdjointMatrix> {
        Ok(SelfAdjointMatrix::hermitize(&self.apply(x.as_matrix(), false)?))
    }

    pub fn validate(&self) -> ChannelReport {
        let n = self.dim();
        let id = ComplexMatrix::identity(n);
        let mut tp = ComplexMatrix::zeros(n, n);
        let mut un = ComplexMatrix::zeros(n, n);
        for k in &self.kraus {
            tp = &tp + &k.adjoint_mul(k);
            un = &un + &(k * &k.adjoint());
        }
        let (unitarity, weight_sum) = match &self.weights {
            Some(w) => {
                let worst = self
                    .kraus
                    .iter()
                    .zip(w)
                    .map(|(k, a)| {
                        let u = k.scale_real(1.0 / a.sqrt());
                        (&u.adjoint_mul(&u) - &id).frobenius_norm()
                    })
                    .fold(0.0, f64::max);
                (worst, (w.iter().sum::<f64>() - 1.0).abs())
            }
            None => (0.0, 0.0),
        };
        let trace_preservation = (&tp - &id).frobenius_norm();
        let unitality = (&un - &id).frobenius_norm();
        let tol = Tolerances::DEFAULT.channel;
        let passed = trace_preservation <= tol && unitality <= tol && unitarity <= tol && weight_sum <= 1e-12;
        ChannelReport {
            trace_preservation,
            unitality,
            unitarity,
            weight_sum,
            passed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("channel serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s)?;
        Self::build(c.kraus, c.weights)
    }
}
