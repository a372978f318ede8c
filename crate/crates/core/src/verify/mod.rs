//! Randomized verification: seeded ensembles, inequality checks, independent
//! oracles and suite aggregation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod checks;
mod ensemble;
mod extremal;
mod fd;
mod quadrature;
mod report;
mod suite;
mod tightness;

pub use checks::{
    bcl_gap, check_bcl, check_fp_lemma, check_key, check_midpoint_convexity, check_monotonicity,
    operator_monotone_gap, BclGap, KeyGap, MonotoneKernel, Triple,
};
pub use ensemble::{
    derive_seed, sample_indefinite_invertible, sample_matrix, sample_psd_increment, sub_seed, GENERATOR, SEED_RULE,
};
pub use extremal::{extremal_search, ExtremalResult};
pub use fd::{fd_oracle, norm_sq_fd, richardson_ratio};
pub use quadrature::{check_h_log, check_integral_rep, gauss_kronrod, IntegralRep, Prefactor, Quadrature};
pub use report::{inputs_digest, CheckSummary, GapRecord, SuiteReport, TrialError, ViolationDump};
pub use suite::{check_operator_monotone, run_suite};
pub use tightness::{fit_tightness_constant, tightness_scan, TightnessPoint};

/// Random matrix ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    /// I.i.d. standard complex normal entries.
    ComplexGinibre,
    /// `(G + G*)/2` of a Ginibre draw.
    SelfAdjoint,
    /// `GG* + δI`.
    PositiveDefinite,
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ensemble::ComplexGinibre => "complex-ginibre",
            Ensemble::SelfAdjoint => "self-adjoint",
            Ensemble::PositiveDefinite => "positive-definite",
        })
    }
}

impl FromStr for Ensemble {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "complex-ginibre" => Ok(Ensemble::ComplexGinibre),
            "self-adjoint" => Ok(Ensemble::SelfAdjoint),
            "positive-definite" => Ok(Ensemble::PositiveDefinite),
            _ => Err(format!("unknown ensemble '{s}'")),
        }
    }
}

/// The check families a suite can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Bcl,
    Key,
    Monotone,
    Convexity,
    Fp,
    Integral,
    Opmono,
}

impl CheckKind {
    pub const ALL: [CheckKind; 7] = [
        CheckKind::Bcl,
        CheckKind::Key,
        CheckKind::Monotone,
        CheckKind::Convexity,
        CheckKind::Fp,
        CheckKind::Integral,
        CheckKind::Opmono,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Bcl => "bcl",
            CheckKind::Key => "key",
            CheckKind::Monotone => "monotone",
            CheckKind::Convexity => "convexity",
            CheckKind::Fp => "fp",
            CheckKind::Integral => "integral",
            CheckKind::Opmono => "opmono",
        }
    }

    pub(crate) fn stream(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown check '{s}'"))
    }
}

/// Configuration shared by every check in a suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrialConfig {
    /// Largest dimension; trials cycle through `min_dim..=dim`.
    pub dim: usize,
    /// Smallest dimension, `None` meaning `dim`.
    pub min_dim: Option<usize>,
    pub p_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    /// Floor for normalized gaps.
    pub tolerance: f64,
    /// Per-check floors keyed by check family name.
    pub tolerance_overrides: BTreeMap<String, f64>,
    /// Ensemble of the norm-inequality pairs.
    pub ensemble: Ensemble,
    /// Unitaries per random unitary-mixture channel.
    pub channel_unitaries: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            dim: 4,
            min_dim: None,
            p_grid: vec![1.1, 1.3, 1.5, 1.7, 1.9, 2.0],
            alpha_grid: vec![0.25, 0.5, 0.75],
            trials: 1000,
            master_seed: 42,
            tolerance: 1e-9,
            tolerance_overrides: BTreeMap::from([("fp".to_string(), 1e-10), ("opmono".to_string(), 1e-8)]),
            ensemble: Ensemble::ComplexGinibre,
            channel_unitaries: 4,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::parameter("dim", 0.0, "must be at least 1"));
        }
        if let Some(m) = self.min_dim {
            if m == 0 || m > self.dim {
                return Err(Error::parameter("min_dim", m as f64, "must lie in [1, dim]"));
            }
        }
        if self.trials == 0 {
            return Err(Error::parameter("trials", 0.0, "must be at least 1"));
        }
        if self.channel_unitaries == 0 {
            return Err(Error::parameter("channel_unitaries", 0.0, "must be at least 1"));
        }
        if let Some(&p) = self.p_grid.iter().find(|p| !(**p > 1.0 && p.is_finite())) {
            return Err(Error::parameter("p", p, "must lie in (1, inf)"));
        }
        if let Some(&a) = self.alpha_grid.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(Error::parameter("alpha", a, "must lie in (0, 1)"));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::parameter("tolerance", self.tolerance, "must be finite and non-negative"));
        }
        for (k, &t) in &self.tolerance_overrides {
            if k.parse::<CheckKind>().is_err() {
                return Err(Error::Precondition(format!("tolerance override for unknown check '{k}'")));
            }
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::parameter("tolerance", t, "must be finite and non-negative"));
            }
        }
        Ok(())
    }

    pub fn min_dim(&self) -> usize {
        self.min_dim.unwrap_or(self.dim)
    }

    /// Dimension used by trial `k`.
    pub fn dim_for_trial(&self, k: usize) -> usize {
        let lo = self.min_dim();
        lo + k % (self.dim - lo + 1)
    }

    /// Tolerance for a record name such as `key.pinch`; the family is the part before the first dot.
    pub fn tolerance_for(&self, check: &str) -> f64 {
        let family = check.split('.').next().unwrap_or(check);
        self.tolerance_overrides.get(family).copied().unwrap_or(self.tolerance)
    }
}
