//! Scalar functions and their first and second divided differences.
//!
//! Divided differences switch to derivative branches when arguments are
//! within `1e-7 · max(1, |r|, |s|)` of each other. Above that threshold the
//! named power and logarithm instances use `expm1`/`ln_1p` forms, which do
//! not cancel.

mod kernel;
pub(crate) mod special;

use std::fmt;
use std::sync::Arc;

pub use kernel::{kernel_fp, kernel_from_ratio, Kernel2, KernelFn};
pub use special::{g_alpha, h_log};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// Open subset of the real line a [`ScalarFunction`] is defined on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Reals,
    /// `ℝ ∖ {0}`
    NonZero,
    /// `(0, ∞)`
    Positive,
}

impl Domain {
    pub fn contains(self, x: f64) -> bool {
        x.is_finite()
            && match self {
                Domain::Reals => true,
                Domain::NonZero => x != 0.0,
                Domain::Positive => x > 0.0,
            }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Domain::Reals => "(-inf, inf)",
            Domain::NonZero => "R \\ {0}",
            Domain::Positive => "(0, inf)",
        }
    }
}

type RealFn = dyn Fn(f64) -> f64 + Send + Sync;

/// User-supplied `(f, f′, f″)` triple.
pub struct CustomFunction {
    name: String,
    domain: Domain,
    value: Box<RealFn>,
    first: Box<RealFn>,
    second: Box<RealFn>,
}

/// A real function of one variable together with its first two derivatives.
#[derive(Clone)]
pub enum ScalarFunction {
    Identity,
    Square,
    /// `x ↦ |x|^p` on `ℝ ∖ {0}`.
    PowerAbs(f64),
    /// `x ↦ x^α` on `(0, ∞)`.
    Power(f64),
    /// Natural logarithm on `(0, ∞)`.
    Log,
    /// [`g_alpha`] for a fixed `α ∈ (0, 1)`.
    GAlpha(f64),
    /// [`h_log`].
    HLog,
    Custom(Arc<CustomFunction>),
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl ScalarFunction {
    pub fn custom(
        name: impl Into<String>,
        domain: Domain,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        first: impl Fn(f64) -> f64 + Send + Sync + 'static,
        second: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ScalarFunction::Custom(Arc::new(CustomFunction {
            name: name.into(),
            domain,
            value: Box::new(value),
            first: Box::new(first),
            second: Box::new(second),
        }))
    }

    pub fn name(&self) -> String {
        match self {
            ScalarFunction::Identity => "x".into(),
            ScalarFunction::Square => "x^2".into(),
            ScalarFunction::PowerAbs(p) => format!("|x|^{p}"),
            ScalarFunction::Power(a) => format!("x^{a}"),
            ScalarFunction::Log => "log".into(),
            ScalarFunction::GAlpha(a) => format!("g_{a}"),
            ScalarFunction::HLog => "h_log".into(),
            ScalarFunction::Custom(c) => c.name.clone(),
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            ScalarFunction::Identity | ScalarFunction::Square => Domain::Reals,
            ScalarFunction::PowerAbs(_) => Domain::NonZero,
            ScalarFunction::Power(_)
            | ScalarFunction::Log
            | ScalarFunction::GAlpha(_)
            | ScalarFunction::HLog => Domain::Positive,
            ScalarFunction::Custom(c) => c.domain,
        }
    }

    /// Rejects invalid instance parameters (e.g. `GAlpha(1.5)`).
    pub fn validate(&self) -> Result<()> {
        match *self {
            ScalarFunction::PowerAbs(p) if !(p > 0.0 && p.is_finite()) => {
                Err(Error::parameter("p", p, "exponent must be positive"))
            }
            ScalarFunction::Power(a) if !a.is_finite() => Err(Error::parameter("alpha", a, "exponent must be finite")),
            ScalarFunction::GAlpha(a) => special::check_alpha(a),
            _ => Ok(()),
        }
    }

    pub(crate) fn check_domain(&self, x: f64) -> Result<()> {
        if self.domain().contains(x) {
            Ok(())
        } else {
            Err(Error::Domain {
                function: self.name(),
                value: x,
                domain: self.domain().describe(),
            })
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.validate()?;
        self.check_domain(x)?;
        Ok(self.value_unchecked(x))
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.validate()?;
        self.check_domain(x)?;
        Ok(self.first_unchecked(x))
    }

    pub fn second_derivative(&self, x: f64) -> Result<f64> {
        self.validate()?;
        self.check_domain(x)?;
        Ok(self.second_unchecked(x))
    }

    pub(crate) fn value_unchecked(&self, x: f64) -> f64 {
        match self {
            ScalarFunction::Identity => x,
            ScalarFunction::Square => x * x,
            ScalarFunction::PowerAbs(p) => x.abs().powf(*p),
            ScalarFunction::Power(a) => x.powf(*a),
            ScalarFunction::Log => x.ln(),
            ScalarFunction::GAlpha(a) => g_alpha(*a, x).unwrap_or(f64::NAN),
            ScalarFunction::HLog => h_log(x).unwrap_or(f64::NAN),
            ScalarFunction::Custom(c) => (c.value)(x),
        }
    }

    pub(crate) fn first_unchecked(&self, x: f64) -> f64 {
        match self {
            ScalarFunction::Identity => 1.0,
            ScalarFunction::Square => 2.0 * x,
            ScalarFunction::PowerAbs(p) => p * x.abs().powf(p - 1.0) * x.signum(),
            ScalarFunction::Power(a) => a * x.powf(a - 1.0),
            ScalarFunction::Log => 1.0 / x,
            ScalarFunction::GAlpha(a) => special::g_alpha_derivatives(*a, x).0,
            ScalarFunction::HLog => special::h_log_derivatives(x).0,
            ScalarFunction::Custom(c) => (c.first)(x),
        }
    }

    pub(crate) fn second_unchecked(&self, x: f64) -> f64 {
        match self {
            ScalarFunction::Identity => 0.0,
            ScalarFunction::Square => 2.0,
            ScalarFunction::PowerAbs(p) => p * (p - 1.0) * x.abs().powf(p - 2.0),
            ScalarFunction::Power(a) => a * (a - 1.0) * x.powf(a - 2.0),
            ScalarFunction::Log => -1.0 / (x * x),
            ScalarFunction::GAlpha(a) => special::g_alpha_derivatives(*a, x).1,
            ScalarFunction::HLog => special::h_log_derivatives(x).1,
            ScalarFunction::Custom(c) => (c.second)(x),
        }
    }
}

/// True when `r` and `s` are close enough to use a derivative branch.
pub fn near_equal(r: f64, s: f64) -> bool {
    (r - s).abs() <= Tolerances::DEFAULT.divdiff_near_equal * 1f64.max(r.abs()).max(s.abs())
}

/// `(r^a − s^a)/(r − s)` for `r, s > 0`, `r ≠ s`, without cancellation.
fn power_quotient(a: f64, r: f64, s: f64) -> f64 {
    let l = ((r - s) / s).ln_1p();
    s.powf(a - 1.0) * (a * l).exp_m1() / l.exp_m1()
}

/// First divided difference with the derivative branch already excluded.
fn quotient1(f: &ScalarFunction, r: f64, s: f64) -> f64 {
    match f {
        ScalarFunction::Identity => 1.0,
        ScalarFunction::Square => r + s,
        ScalarFunction::Power(a) => power_quotient(*a, r, s),
        ScalarFunction::Log => ((r - s) / s).ln_1p() / (r - s),
        ScalarFunction::PowerAbs(p) if r > 0.0 && s > 0.0 => power_quotient(*p, r, s),
        ScalarFunction::PowerAbs(p) if r < 0.0 && s < 0.0 => -power_quotient(*p, -r, -s),
        _ => (f.value_unchecked(r) - f.value_unchecked(s)) / (r - s),
    }
}

/// `f^[1](r, s)`: `(f(r) − f(s))/(r − s)`, or `f′` at the midpoint when `r ≈ s`.
pub fn div_diff1(f: &ScalarFunction, r: f64, s: f64) -> Result<f64> {
    f.validate()?;
    f.check_domain(r)?;
    f.check_domain(s)?;
    Ok(div_diff1_unchecked(f, r, s))
}

pub(crate) fn div_diff1_unchecked(f: &ScalarFunction, r: f64, s: f64) -> f64 {
    if near_equal(r, s) {
        f.first_unchecked(0.5 * (r + s))
    } else if r < s {
        quotient1(f, r, s)
    } else {
        quotient1(f, s, r)
    }
}

/// `f^[2](r, s, t)`, symmetric in its arguments.
///
/// Arguments are sorted first so the result does not depend on their order.
/// Coincident pairs collapse onto their midpoint, and `f^[2](x, x, x) = f″(x)/2`.
pub fn div_diff2(f: &ScalarFunction, r: f64, s: f64, t: f64) -> Result<f64> {
    f.validate()?;
    for x in [r, s, t] {
        f.check_domain(x)?;
    }
    let mut x = [r, s, t];
    x.sort_by(f64::total_cmp);
    let [x0, x1, x2] = x;
    let low = near_equal(x0, x1);
    let high = near_equal(x1, x2);
    Ok(match (low, high) {
        (true, true) => 0.5 * f.second_unchecked((x0 + x1 + x2) / 3.0),
        (true, false) => {
            let m = 0.5 * (x0 + x1);
            (div_diff1_unchecked(f, m, x2) - f.first_unchecked(m)) / (x2 - m)
        }
        (false, true) => {
            let m = 0.5 * (x1 + x2);
            (f.first_unchecked(m) - div_diff1_unchecked(f, x0, m)) / (m - x0)
        }
        (false, false) => (div_diff1_unchecked(f, x1, x2) - div_diff1_unchecked(f, x0, x1)) / (x2 - x0),
    })
}

/// `f^[2](r, s, r) + f^[2](s, r, s)`, which equals `(f′(r) − f′(s))/(r − s)`
/// and `f″(r)` on the diagonal.
///
/// For `|x|^p` this uses the closed forms
/// `p(|r|^{p−1} − |s|^{p−1})/(|r| − |s|)` when `rs > 0` and
/// `p(|r|^{p−1} + |s|^{p−1})/(|r| + |s|)` when `rs < 0`.
pub fn second_sum(f: &ScalarFunction, r: f64, s: f64) -> Result<f64> {
    f.validate()?;
    f.check_domain(r)?;
    f.check_domain(s)?;
    Ok(second_sum_unchecked(f, r, s))
}

pub(crate) fn second_sum_unchecked(f: &ScalarFunction, r: f64, s: f64) -> f64 {
    match f {
        ScalarFunction::PowerAbs(p) => {
            let (a, b) = (r.abs(), s.abs());
            if r * s < 0.0 {
                p * (a.powf(p - 1.0) + b.powf(p - 1.0)) / (a + b)
            } else {
                p * div_diff1_unchecked(&ScalarFunction::Power(p - 1.0), a, b)
            }
        }
        ScalarFunction::Power(a) => a * div_diff1_unchecked(&ScalarFunction::Power(a - 1.0), r, s),
        ScalarFunction::Square => 2.0,
        ScalarFunction::Identity => 0.0,
        ScalarFunction::Log => -1.0 / (r * s),
        _ if near_equal(r, s) => f.second_unchecked(0.5 * (r + s)),
        _ => (f.first_unchecked(r) - f.first_unchecked(s)) / (r - s),
    }
}
