use serde::{Deserialize, Serialize};

use super::checks::check_bcl;
use super::report::GapRecord;
use crate::error::{Error, Result};
use crate::linalg::{schatten_norm, ComplexMatrix};

/// `ρ(ε)` for the commuting pair `A = I₂`, `B = diag(ε, −ε)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessPoint {
    pub p: f64,
    pub eps: f64,
    /// `(‖A+B‖_p² + ‖A−B‖_p² − 2‖A‖_p²) / (2‖B‖_p²)`
    pub rho: f64,
    /// `ρ(ε) − (p − 1)`
    pub deviation: f64,
    pub record: GapRecord,
}

pub fn tightness_scan(p: f64, eps_grid: &[f64]) -> Result<Vec<TightnessPoint>> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::parameter("p", p, "must lie in (1, 2]"));
    }
    eps_grid
        .iter()
        .map(|&eps| {
            if !(eps > 0.0 && eps <= 0.1) {
                return Err(Error::parameter("eps", eps, "must lie in (0, 0.1]"));
            }
            let a = ComplexMatrix::identity(2);
            let b = ComplexMatrix::from_diag(&[eps, -eps]);
            let sq = |m: &ComplexMatrix| schatten_norm(m, p).map(|v| v * v);
            let rho = (sq(&(&a + &b))? + sq(&(&a - &b))? - 2.0 * sq(&a)?) / (2.0 * sq(&b)?);
            let record = check_bcl(&a, &b, p)?.original.with_dim(2);
            Ok(TightnessPoint {
                p,
                eps,
                rho,
                deviation: rho - (p - 1.0),
                record: GapRecord {
                    check: "tightness".into(),
                    ..record
                },
            })
        })
        .collect()
}

/// Least-squares `C` in `deviation ≈ C ε²`.
pub fn fit_tightness_constant(points: &[TightnessPoint]) -> f64 {
    let num: f64 = points.iter().map(|q| q.deviation * q.eps * q.eps).sum();
    let den: f64 = points.iter().map(|q| q.eps.powi(4)).sum();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_examples() {
        let pts = tightness_scan(1.5, &[1e-3]).unwrap();
        assert!(pts[0].deviation.abs() < 1e-4);
        for q in tightness_scan(2.0, &[1e-2, 1e-3, 0.1]).unwrap() {
            // cancellation in the numerator costs about 1/ε² ulps
            assert!((q.rho - 1.0).abs() < 1e-15 / (q.eps * q.eps));
        }
        let pts = tightness_scan(1.5, &[1e-2, 5e-3]).unwrap();
        let ratio = pts[0].deviation / pts[1].deviation;
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
        assert!(tightness_scan(1.5, &[0.2]).is_err());
        assert!(tightness_scan(0.5, &[0.01]).is_err());
    }

    #[test]
    fn deviation_matches_taylor_coefficient() {
        // ((1+ε)^p + (1−ε)^p)/2 raised to 2/p gives ρ − (p−1) = p(p−1)(2−p)/6 · ε² + O(ε⁴).
        for p in [1.2, 1.5, 1.8] {
            let eps: f64 = 1e-2;
            let x = ((1.0 + eps).powf(p) + (1.0 - eps).powf(p)) / 2.0;
            let scalar = (x.powf(2.0 / p) - 1.0) / (eps * eps);
            let pts = tightness_scan(p, &[eps, 5e-3]).unwrap();
            assert!((pts[0].rho - scalar).abs() < 1e-9);
            assert!(pts[0].record.gap >= 0.0);
            let c = p * (p - 1.0) * (2.0 - p) / 6.0;
            assert!((fit_tightness_constant(&pts) - c).abs() < 1e-3 * c.max(1e-2) + 1e-5, "{p}");
        }
    }
}
