use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::TrialConfig;
use crate::channel::QuantumChannel;
use crate::error::Result;
use crate::linalg::ComplexMatrix;

/// One evaluated inequality. `gap ≥ 0` means the inequality holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub check: String,
    /// The `p` or `α` the check was run at.
    pub param: f64,
    pub trial: u64,
    pub trial_seed: u64,
    pub dim: usize,
    pub gap: f64,
    pub normalizer: f64,
    pub normalized_gap: f64,
    /// Truncated SHA-256 of the inputs, empty when not computed.
    #[serde(default)]
    pub inputs_digest: String,
}

impl GapRecord {
    /// A non-positive or non-finite normalizer is replaced by 1.
    pub fn new(check: impl Into<String>, param: f64, gap: f64, normalizer: f64) -> Self {
        let normalizer = if normalizer > 0.0 && normalizer.is_finite() { normalizer } else { 1.0 };
        Self {
            check: check.into(),
            param,
            trial: 0,
            trial_seed: 0,
            dim: 0,
            gap,
            normalizer,
            normalized_gap: gap / normalizer,
            inputs_digest: String::new(),
        }
    }

    pub fn with_trial(mut self, trial: u64, trial_seed: u64) -> Self {
        self.trial = trial;
        self.trial_seed = trial_seed;
        self
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_digest(mut self, digest: &str) -> Self {
        self.inputs_digest = digest.to_string();
        self
    }

    pub fn is_violation(&self, tolerance: f64) -> bool {
        !(self.normalized_gap >= -tolerance)
    }
}

/// Hex SHA-256 (first 128 bits) of the parameter and the matrices' little-endian bytes.
pub fn inputs_digest(param: f64, inputs: &[&ComplexMatrix]) -> String {
    let mut h = Sha256::new();
    h.update(param.to_le_bytes());
    for m in inputs {
        h.update((m.rows() as u64).to_le_bytes());
        h.update(m.to_le_bytes());
    }
    hex::encode(&h.finalize()[..16])
}

/// A trial that raised an error instead of producing records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialError {
    pub check: String,
    pub param: f64,
    pub trial: u64,
    pub trial_seed: u64,
    pub message: String,
    pub numerical: bool,
}

/// Full inputs of a violating trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationDump {
    pub check: String,
    pub param: f64,
    pub trial: u64,
    pub trial_seed: u64,
    pub gap: f64,
    pub normalized_gap: f64,
    pub inputs: BTreeMap<String, ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<QuantumChannel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: String,
    pub param: f64,
    pub tolerance: f64,
    pub records: usize,
    pub min_normalized_gap: f64,
    pub max_normalized_gap: f64,
    pub mean_normalized_gap: f64,
    pub violations: usize,
    pub worst_trial_seed: u64,
    pub errors: usize,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.errors == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub generator: String,
    pub seed_rule: String,
    pub config: TrialConfig,
    pub summaries: Vec<CheckSummary>,
    pub records: Vec<GapRecord>,
    pub errors: Vec<TrialError>,
    pub violations: Vec<ViolationDump>,
    /// Free-form findings, e.g. which integral prefactor the quadrature supports.
    pub notes: Vec<String>,
    pub wall_clock_seconds: f64,
}

impl SuiteReport {
    /// Builds summaries grouped by `(check, param)` in order of first appearance.
    pub(crate) fn assemble(
        config: TrialConfig,
        records: Vec<GapRecord>,
        errors: Vec<TrialError>,
        violations: Vec<ViolationDump>,
        notes: Vec<String>,
    ) -> Self {
        let mut order: Vec<(String, u64)> = Vec::new();
        let mut groups: HashMap<(String, u64), Vec<&GapRecord>> = HashMap::new();
        for r in &records {
            let key = (r.check.clone(), r.param.to_bits());
            groups
                .entry(key.clone())
                .or_insert_with(|| {
                    order.push(key);
                    Vec::new()
                })
                .push(r);
        }
        for e in &errors {
            let key = (e.check.clone(), e.param.to_bits());
            groups.entry(key.clone()).or_insert_with(|| {
                order.push(key);
                Vec::new()
            });
        }
        let summaries = order
            .iter()
            .map(|key| {
                let rs = &groups[key];
                let tolerance = config.tolerance_for(&key.0);
                let gaps = rs.iter().map(|r| r.normalized_gap);
                let worst = rs
                    .iter()
                    .min_by(|a, b| a.normalized_gap.total_cmp(&b.normalized_gap))
                    .map(|r| r.trial_seed)
                    .unwrap_or(0);
                let n = rs.len();
                CheckSummary {
                    check: key.0.clone(),
                    param: f64::from_bits(key.1),
                    tolerance,
                    records: n,
                    min_normalized_gap: gaps.clone().fold(f64::INFINITY, f64::min),
                    max_normalized_gap: gaps.clone().fold(f64::NEG_INFINITY, f64::max),
                    mean_normalized_gap: if n == 0 { f64::NAN } else { gaps.sum::<f64>() / n as f64 },
                    violations: rs.iter().filter(|r| r.is_violation(tolerance)).count(),
                    worst_trial_seed: worst,
                    errors: errors
                        .iter()
                        .filter(|e| e.check == key.0 && e.param.to_bits() == key.1)
                        .count(),
                }
            })
            .collect();
        Self {
            generator: super::ensemble::GENERATOR.to_string(),
            seed_rule: super::ensemble::SEED_RULE.to_string(),
            config,
            summaries,
            records,
            errors,
            violations,
            notes,
            wall_clock_seconds: 0.0,
        }
    }

    pub fn violation_count(&self) -> usize {
        self.summaries.iter().map(|s| s.violations).sum()
    }

    pub fn numerical_error_count(&self) -> usize {
        self.errors.iter().filter(|e| e.numerical).count()
    }

    pub fn passed(&self) -> bool {
        self.violation_count() == 0 && self.errors.is_empty()
    }

    pub fn summary(&self, check: &str) -> impl Iterator<Item = &CheckSummary> + '_ {
        let check = check.to_string();
        self.summaries.iter().filter(move |s| s.check == check)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Columns `check,param,trial_seed,gap,normalized_gap`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["check", "param", "trial_seed", "gap", "normalized_gap"])?;
        for r in &self.records {
            w.write_record([
                r.check.clone(),
                r.param.to_string(),
                r.trial_seed.to_string(),
                format!("{:e}", r.gap),
                format!("{:e}", r.normalized_gap),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Fixed-width table of the summaries.
    pub fn summary_table(&self) -> String {
        let mut s = format!(
            "{:<22} {:>8} {:>8} {:>12} {:>12} {:>6} {:>6}  verdict\n",
            "check", "param", "records", "min gap", "mean gap", "viol", "err"
        );
        for c in &self.summaries {
            s.push_str(&format!(
                "{:<22} {:>8.4} {:>8} {:>12.3e} {:>12.3e} {:>6} {:>6}  {}\n",
                c.check,
                c.param,
                c.records,
                c.min_normalized_gap,
                c.mean_normalized_gap,
                c.violations,
                c.errors,
                if c.passed() { "PASS" } else { "FAIL" }
            ));
        }
        s
    }
}
