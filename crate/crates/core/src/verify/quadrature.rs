use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::report::GapRecord;
use crate::divdiff::{h_log, special::check_alpha};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights live on the odd Kronrod nodes.
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Quadrature value with its accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = K15_WEIGHTS[7] * fc;
    let mut gauss = G7_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        kronrod += K15_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += G7_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) on `[a, b]`, bisecting the worst interval until the
/// summed error estimate is below `abs_tol`.
pub fn gauss_kronrod(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> Result<Quadrature> {
    const MAX_INTERVALS: usize = 2000;
    let (v, e) = gk15(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let value: f64 = pieces.iter().map(|p| p.2).sum();
        let error: f64 = pieces.iter().map(|p| p.3).sum();
        if !value.is_finite() {
            return Err(Error::Quadrature {
                estimate: value,
                error_estimate: error,
            });
        }
        if error <= abs_tol {
            return Ok(Quadrature {
                value,
                error_estimate: error,
                intervals: pieces.len(),
            });
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature {
                estimate: value,
                error_estimate: error,
            });
        }
        let worst = (0..pieces.len()).max_by(|&i, &j| pieces[i].3.total_cmp(&pieces[j].3)).unwrap_or(0);
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// Which prefactor turns `∫₀^∞ t^{α−1}/(t+s) dt` into `s^{α−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prefactor {
    /// `sin(απ)/π`
    SinOverPi,
    /// `π/sin(απ)`
    PiOverSin,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralRep {
    pub alpha: f64,
    pub s: f64,
    pub integral: Quadrature,
    pub target: f64,
    /// `(π/sin(απ)) · ∫`
    pub with_pi_over_sin: f64,
    /// `(sin(απ)/π) · ∫`
    pub with_sin_over_pi: f64,
    pub rel_err_pi_over_sin: f64,
    pub rel_err_sin_over_pi: f64,
    pub supports: Prefactor,
}

impl IntegralRep {
    /// Gap `1e−6 − relative error` of the `sin(απ)/π` reconstruction.
    pub fn record(&self) -> GapRecord {
        GapRecord::new("integral", self.alpha, 1e-6 - self.rel_err_sin_over_pi, 1.0).with_dim(1)
    }
}

/// `∫₀^∞ t^{α−1}/(t + s) dt`, split at 1. The head uses `t = v^{1/α}`, the tail `t = 1/u`
/// then `u = w^{1/(1−α)}`; both integrands become bounded:
/// `(1/α)∫₀¹ dv/(v^{1/α} + s) + (1/(1−α))∫₀¹ dw/(1 + s w^{1/(1−α)})`.
pub fn check_integral_rep(alpha: f64, s: f64) -> Result<IntegralRep> {
    check_alpha(alpha)?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::parameter("s", s, "must be positive"));
    }
    let tol = Tolerances::DEFAULT.quadrature_absolute;
    let head = gauss_kronrod(|v| 1.0 / (v.powf(1.0 / alpha) + s), 0.0, 1.0, tol * alpha / 2.0)?;
    let tail = gauss_kronrod(|w| 1.0 / (1.0 + s * w.powf(1.0 / (1.0 - alpha))), 0.0, 1.0, tol * (1.0 - alpha) / 2.0)?;
    let integral = Quadrature {
        value: head.value / alpha + tail.value / (1.0 - alpha),
        error_estimate: head.error_estimate / alpha + tail.error_estimate / (1.0 - alpha),
        intervals: head.intervals + tail.intervals,
    };
    let target = s.powf(alpha - 1.0);
    let sine = (alpha * PI).sin();
    let with_pi_over_sin = PI / sine * integral.value;
    let with_sin_over_pi = sine / PI * integral.value;
    let rel = |c: f64| (c - target).abs() / target;
    let (e1, e2) = (rel(with_pi_over_sin), rel(with_sin_over_pi));
    let supports = if e2 <= 1e-6 {
        Prefactor::SinOverPi
    } else if e1 <= 1e-6 {
        Prefactor::PiOverSin
    } else {
        Prefactor::Neither
    };
    Ok(IntegralRep {
        alpha,
        s,
        integral,
        target,
        with_pi_over_sin,
        with_sin_over_pi,
        rel_err_pi_over_sin: e1,
        rel_err_sin_over_pi: e2,
        supports,
    })
}

/// Gap `1e−8 − |h(x) − ∫₀¹ xᵗ dt|`.
pub fn check_h_log(x: f64) -> Result<GapRecord> {
    let closed = h_log(x)?;
    let q = gauss_kronrod(|t| x.powf(t), 0.0, 1.0, 1e-12)?;
    Ok(GapRecord::new("integral.h_log", x, 1e-8 - (closed - q.value).abs(), 1.0).with_dim(1))
}
