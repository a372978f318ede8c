use std::fmt;
use std::sync::Arc;

use super::{div_diff1_unchecked, second_sum_unchecked, Domain, ScalarFunction};
use crate::error::{Error, Result};

pub type KernelFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// Two-variable kernel `F(x, y)` used as the weight of an operator integral.
#[derive(Clone)]
pub enum Kernel2 {
    Constant(f64),
    /// `f^[1](x, y)`.
    DivDiff1(ScalarFunction),
    /// `f^[2](x, y, x) + f^[2](y, x, y)`.
    SecondSum(ScalarFunction),
    /// `F_p(r, s) = p · (x^{p−1})^[1](r, s)` on `(0, ∞)²`, `1 < p ≤ 2`.
    Fp(f64),
    /// `f(x/y) · y`.
    FromRatio(ScalarFunction),
    /// `[f(x/y) · y]^{−θ}`, the weight of the quasi-entropy.
    QuasiEntropy { f: ScalarFunction, theta: f64 },
    /// `1 / F(x, y)`.
    Reciprocal(Box<Kernel2>),
    Custom {
        name: String,
        domain: Domain,
        symmetric: bool,
        eval: Arc<KernelFn>,
    },
}

impl fmt::Debug for Kernel2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel2::Constant(c) => write!(f, "Constant({c})"),
            Kernel2::DivDiff1(g) => write!(f, "DivDiff1({g:?})"),
            Kernel2::SecondSum(g) => write!(f, "SecondSum({g:?})"),
            Kernel2::Fp(p) => write!(f, "Fp({p})"),
            Kernel2::FromRatio(g) => write!(f, "FromRatio({g:?})"),
            Kernel2::QuasiEntropy { f: g, theta } => write!(f, "QuasiEntropy({g:?}, {theta})"),
            Kernel2::Reciprocal(k) => write!(f, "Reciprocal({k:?})"),
            Kernel2::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl Kernel2 {
    /// `F_p` after checking `1 < p ≤ 2`.
    pub fn fp(p: f64) -> Result<Self> {
        check_fp_exponent(p)?;
        Ok(Kernel2::Fp(p))
    }

    /// `f_α^[1]` for `f_α(x) = x^α`.
    pub fn power_div_diff(alpha: f64) -> Self {
        Kernel2::DivDiff1(ScalarFunction::Power(alpha))
    }

    /// `g^[1]` with `g = log`.
    pub fn log_div_diff() -> Self {
        Kernel2::DivDiff1(ScalarFunction::Log)
    }

    pub fn custom(
        name: impl Into<String>,
        domain: Domain,
        symmetric: bool,
        eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Kernel2::Custom {
            name: name.into(),
            domain,
            symmetric,
            eval: Arc::new(eval),
        }
    }

    pub fn reciprocal(self) -> Self {
        Kernel2::Reciprocal(Box::new(self))
    }

    pub fn domain(&self) -> Domain {
        match self {
            Kernel2::Constant(_) => Domain::Reals,
            Kernel2::DivDiff1(f) | Kernel2::SecondSum(f) => f.domain(),
            Kernel2::Fp(_) | Kernel2::FromRatio(_) | Kernel2::QuasiEntropy { .. } => Domain::Positive,
            Kernel2::Reciprocal(k) => k.domain(),
            Kernel2::Custom { domain, .. } => *domain,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            Kernel2::Constant(_) | Kernel2::DivDiff1(_) | Kernel2::SecondSum(_) | Kernel2::Fp(_) => true,
            // f(x/y)y is symmetric exactly when f(t) = t f(1/t).
            Kernel2::FromRatio(f) | Kernel2::QuasiEntropy { f, .. } => {
                matches!(f, ScalarFunction::HLog | ScalarFunction::GAlpha(_))
            }
            Kernel2::Reciprocal(k) => k.is_symmetric(),
            Kernel2::Custom { symmetric, .. } => *symmetric,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Kernel2::Fp(p) => check_fp_exponent(*p),
            Kernel2::DivDiff1(f) | Kernel2::SecondSum(f) | Kernel2::FromRatio(f) => f.validate(),
            Kernel2::QuasiEntropy { f, theta } => {
                if !(*theta > 0.0 && *theta <= 1.0) {
                    return Err(Error::parameter("theta", *theta, "must lie in (0, 1]"));
                }
                f.validate()
            }
            Kernel2::Reciprocal(k) => k.validate(),
            Kernel2::Constant(_) | Kernel2::Custom { .. } => Ok(()),
        }
    }

    pub(crate) fn check_argument(&self, x: f64) -> Result<()> {
        let d = self.domain();
        if d.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain {
                function: format!("{self:?}"),
                value: x,
                domain: d.describe(),
            })
        }
    }

    /// `F(x, y)` with parameter and domain checks.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        self.validate()?;
        self.check_argument(x)?;
        self.check_argument(y)?;
        Ok(self.eval_unchecked(x, y))
    }

    pub(crate) fn eval_unchecked(&self, x: f64, y: f64) -> f64 {
        match self {
            Kernel2::Constant(c) => *c,
            Kernel2::DivDiff1(f) => div_diff1_unchecked(f, x, y),
            Kernel2::SecondSum(f) => second_sum_unchecked(f, x, y),
            Kernel2::Fp(p) => p * div_diff1_unchecked(&ScalarFunction::Power(p - 1.0), x, y),
            Kernel2::FromRatio(f) => f.value_unchecked(x / y) * y,
            Kernel2::QuasiEntropy { f, theta } => (f.value_unchecked(x / y) * y).powf(-theta),
            Kernel2::Reciprocal(k) => 1.0 / k.eval_unchecked(x, y),
            Kernel2::Custom { eval, .. } => eval(x, y),
        }
    }

    /// Checks every argument, then evaluates `F(λ_j, μ_k)` on a grid.
    pub(crate) fn grid(&self, rows: &[f64], cols: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.validate()?;
        for &x in rows.iter().chain(cols) {
            self.check_argument(x)?;
        }
        Ok(rows
            .iter()
            .map(|&x| cols.iter().map(|&y| self.eval_unchecked(x, y)).collect())
            .collect())
    }
}

fn check_fp_exponent(p: f64) -> Result<()> {
    if p > 1.0 && p <= 2.0 {
        Ok(())
    } else {
        Err(Error::parameter("p", p, "F_p needs 1 < p <= 2"))
    }
}

/// `F_p(r, s)`: `p(r^{p−1} − s^{p−1})/(r − s)`, and `p(p−1) r^{p−2}` when `r ≈ s`.
pub fn kernel_fp(p: f64, r: f64, s: f64) -> Result<f64> {
    Kernel2::Fp(p).eval(r, s)
}

/// The kernel `F(x, y) = f(x/y) · y` attached to `J_f = f(L_A R_B^{-1}) R_B`.
pub fn kernel_from_ratio(f: ScalarFunction) -> Kernel2 {
    Kernel2::FromRatio(f)
}
