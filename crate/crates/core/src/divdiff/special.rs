//! Closed-form special functions with removable singularities at `x = 1`:
//! `g_α(x) = ((x^α − 1)/(x − 1))^{1/(α−1)}` and `h(x) = (x − 1)/log x`.

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const SERIES_RADIUS: f64 = 0.25;
const SERIES_TERMS: usize = 48;

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::parameter("alpha", alpha, "must lie in (0, 1)"))
    }
}

fn check_positive(function: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function: function.to_string(),
            value: x,
            domain: "(0, inf)",
        })
    }
}

/// `(x^α − 1)/(x − 1)` with its first two derivatives.
fn ratio_q(alpha: f64, x: f64) -> (f64, f64, f64) {
    let d = x - 1.0;
    if d.abs() <= SERIES_RADIUS {
        // q(x) = Σ_k C(α, k+1) d^k
        let mut coeff = alpha; // C(α, 1)
        let (mut q, mut q1, mut q2) = (0.0, 0.0, 0.0);
        let mut pow = 1.0; // d^k
        let mut pow1 = 0.0; // d^{k-1}
        let mut pow2 = 0.0; // d^{k-2}
        for k in 0..SERIES_TERMS {
            let kf = k as f64;
            q += coeff * pow;
            q1 += kf * coeff * pow1;
            q2 += kf * (kf - 1.0) * coeff * pow2;
            pow2 = pow1;
            pow1 = pow;
            pow *= d;
            coeff *= (alpha - kf - 1.0) / (kf + 2.0);
        }
        (q, q1, q2)
    } else {
        let n = x.powf(alpha) - 1.0;
        let n1 = alpha * x.powf(alpha - 1.0);
        let n2 = alpha * (alpha - 1.0) * x.powf(alpha - 2.0);
        let q = n / d;
        let q1 = n1 / d - n / (d * d);
        let q2 = n2 / d - 2.0 * n1 / (d * d) + 2.0 * n / (d * d * d);
        (q, q1, q2)
    }
}

fn ratio_value(alpha: f64, x: f64) -> f64 {
    let d = x - 1.0;
    if d.abs() <= Tolerances::DEFAULT.g_alpha_taylor {
        let c0 = alpha;
        let c1 = alpha * (alpha - 1.0) / 2.0;
        let c2 = alpha * (alpha - 1.0) * (alpha - 2.0) / 6.0;
        c0 + d * (c1 + d * c2)
    } else {
        let l = x.ln();
        (alpha * l).exp_m1() / l.exp_m1()
    }
}

/// `g_α(x)`, continuous at `x = 1` with value `α^{1/(α−1)}`.
pub fn g_alpha(alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive("g_alpha", x)?;
    Ok(ratio_value(alpha, x).powf(1.0 / (alpha - 1.0)))
}

pub(crate) fn g_alpha_derivatives(alpha: f64, x: f64) -> (f64, f64) {
    let (q, q1, q2) = ratio_q(alpha, x);
    let e = 1.0 / (alpha - 1.0);
    let d1 = e * q.powf(e - 1.0) * q1;
    let d2 = e * (e - 1.0) * q.powf(e - 2.0) * q1 * q1 + e * q.powf(e - 1.0) * q2;
    (d1, d2)
}

/// `∫₀¹ t^m e^{tu} dt` for `m = 0, 1, 2`.
fn exp_moments(u: f64) -> [f64; 3] {
    if u.abs() <= 1.0 {
        let mut out = [0.0; 3];
        let mut term = 1.0; // u^k / k!
        for k in 0..30 {
            for (m, slot) in out.iter_mut().enumerate() {
                *slot += term / (m + k + 1) as f64;
            }
            term *= u / (k + 1) as f64;
        }
        out
    } else {
        let e = u.exp();
        [
            u.exp_m1() / u,
            (e * (u - 1.0) + 1.0) / (u * u),
            (e * (u * u - 2.0 * u + 2.0) - 2.0) / (u * u * u),
        ]
    }
}

/// `h(x) = (x − 1)/log x`, with `h(1) = 1`.
pub fn h_log(x: f64) -> Result<f64> {
    check_positive("h_log", x)?;
    Ok(exp_moments(x.ln())[0])
}

pub(crate) fn h_log_derivatives(x: f64) -> (f64, f64) {
    let [_, m1, m2] = exp_moments(x.ln());
    (m1 / x, (m2 - m1) / (x * x))
}
