use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::checks::{
    check_bcl, check_fp_lemma, check_key, check_midpoint_convexity, check_monotonicity, operator_monotone_gap,
    MonotoneKernel, Triple,
};
use super::ensemble::{derive_seed, sample_indefinite_invertible, sample_matrix, sample_psd_increment, sub_seed};
use super::quadrature::{check_h_log, check_integral_rep, Prefactor};
use super::report::{inputs_digest, GapRecord, SuiteReport, TrialError, ViolationDump};
use super::{CheckKind, Ensemble, TrialConfig};
use crate::channel::QuantumChannel;
use crate::divdiff::ScalarFunction;
use crate::error::Result;
use crate::linalg::{ComplexMatrix, SelfAdjointMatrix};

const INDEFINITE_MARGIN: f64 = 1e-2;
const INTEGRAL_ALPHAS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
const INTEGRAL_S: [f64; 3] = [0.5, 1.0, 2.0];
const H_LOG_POINTS: [f64; 4] = [0.5, 1.0, std::f64::consts::E, 10.0];

/// What one trial hands back: its records and the inputs needed to replay it.
struct TrialData {
    records: Vec<GapRecord>,
    inputs: Vec<(&'static str, ComplexMatrix)>,
    channel: Option<QuantumChannel>,
}

#[derive(Default)]
struct Collected {
    records: Vec<GapRecord>,
    errors: Vec<TrialError>,
    dumps: Vec<ViolationDump>,
}

impl Collected {
    fn extend(&mut self, other: Collected) {
        self.records.extend(other.records);
        self.errors.extend(other.errors);
        self.dumps.extend(other.dumps);
    }
}

fn pd(dim: usize, seed: u64) -> SelfAdjointMatrix {
    SelfAdjointMatrix::hermitize(&sample_matrix(Ensemble::PositiveDefinite, dim, seed))
}

fn sa(dim: usize, seed: u64) -> SelfAdjointMatrix {
    SelfAdjointMatrix::hermitize(&sample_matrix(Ensemble::SelfAdjoint, dim, seed))
}

/// Runs `trial` for every `(param, k)` in parallel; output order is `(param index, k)`.
fn run_trials<F>(config: &TrialConfig, kind: CheckKind, params: &[f64], trial: F) -> Collected
where
    F: Fn(f64, u64, usize, usize) -> Result<TrialData> + Sync,
{
    let tasks: Vec<(usize, usize)> = (0..params.len()).flat_map(|i| (0..config.trials).map(move |k| (i, k))).collect();
    let outcomes: Vec<Collected> = tasks
        .par_iter()
        .map(|&(i, k)| {
            let param = params[i];
            let seed = derive_seed(config.master_seed, kind.stream(), i as u64, k as u64);
            let dim = config.dim_for_trial(k);
            let mut out = Collected::default();
            match trial(param, seed, dim, k) {
                Ok(data) => {
                    let refs: Vec<&ComplexMatrix> = data.inputs.iter().map(|(_, m)| m).collect();
                    let digest = inputs_digest(param, &refs);
                    for r in data.records {
                        let r = r.with_trial(k as u64, seed).with_digest(&digest);
                        if r.is_violation(config.tolerance_for(&r.check)) {
                            out.dumps.push(ViolationDump {
                                check: r.check.clone(),
                                param: r.param,
                                trial: k as u64,
                                trial_seed: seed,
                                gap: r.gap,
                                normalized_gap: r.normalized_gap,
                                inputs: data.inputs.iter().map(|(n, m)| (n.to_string(), m.clone())).collect(),
                                channel: data.channel.clone(),
                            });
                        }
                        out.records.push(r);
                    }
                }
                Err(e) => out.errors.push(TrialError {
                    check: kind.name().to_string(),
                    param,
                    trial: k as u64,
                    trial_seed: seed,
                    message: e.to_string(),
                    numerical: e.is_numerical(),
                }),
            }
            out
        })
        .collect();
    let mut all = Collected::default();
    for o in outcomes {
        all.extend(o);
    }
    all
}

fn sub_two(p_grid: &[f64]) -> Vec<f64> {
    p_grid.iter().copied().filter(|&p| p <= 2.0).collect()
}

fn run_bcl(config: &TrialConfig) -> Collected {
    run_trials(config, CheckKind::Bcl, &config.p_grid, |p, seed, dim, _| {
        let a = sample_matrix(config.ensemble, dim, sub_seed(seed, 0));
        let b = sample_matrix(config.ensemble, dim, sub_seed(seed, 1));
        let r = check_bcl(&a, &b, p)?;
        Ok(TrialData {
            records: vec![r.original, r.embedded],
            inputs: vec![("A", a), ("B", b)],
            channel: None,
        })
    })
}

fn run_key(config: &TrialConfig) -> Collected {
    run_trials(config, CheckKind::Key, &sub_two(&config.p_grid), |p, seed, dim, k| {
        let a = if k % 2 == 0 {
            pd(dim, sub_seed(seed, 0))
        } else {
            sample_indefinite_invertible(dim, sub_seed(seed, 0), INDEFINITE_MARGIN)?
        };
        let b = sa(dim, sub_seed(seed, 1));
        let r = check_key(&a, &b, p)?;
        let mut records = vec![r.main];
        records.extend(r.links);
        Ok(TrialData {
            records,
            inputs: vec![("A", a.into_matrix()), ("B", b.into_matrix())],
            channel: None,
        })
    })
}

fn run_monotone(config: &TrialConfig) -> Collected {
    run_trials(config, CheckKind::Monotone, &config.alpha_grid, |alpha, seed, dim, k| {
        let a = pd(dim, sub_seed(seed, 0));
        let b = pd(dim, sub_seed(seed, 1));
        let x = sample_matrix(Ensemble::ComplexGinibre, dim, sub_seed(seed, 2));
        let channel = if k % 2 == 0 {
            QuantumChannel::unitary_mixture(dim, config.channel_unitaries, sub_seed(seed, 3))?
        } else {
            QuantumChannel::pinching_of(&sa(dim, sub_seed(seed, 4)))?
        };
        let mut records = Vec::new();
        for kernel in [MonotoneKernel::FAlpha1(alpha), MonotoneKernel::LogG1, MonotoneKernel::QuasiH(alpha)] {
            let mut r = check_monotonicity(kernel, &a, &b, &x, &channel)?;
            r.param = alpha;
            records.push(r);
        }
        let id = check_monotonicity(MonotoneKernel::FAlpha1(alpha), &a, &b, &x, &QuantumChannel::identity(dim))?;
        records.push(GapRecord::new("monotone.identity", alpha, -id.gap.abs(), id.normalizer).with_dim(dim));
        Ok(TrialData {
            records,
            inputs: vec![("A", a.into_matrix()), ("B", b.into_matrix()), ("X", x)],
            channel: Some(channel),
        })
    })
}

fn run_convexity(config: &TrialConfig) -> Collected {
    run_trials(config, CheckKind::Convexity, &config.alpha_grid, |alpha, seed, dim, _| {
        let triple = |base: u64| Triple {
            a: pd(dim, sub_seed(seed, base)),
            b: pd(dim, sub_seed(seed, base + 1)),
            x: sample_matrix(Ensemble::ComplexGinibre, dim, sub_seed(seed, base + 2)),
        };
        let (t1, t2) = (triple(0), triple(3));
        let r = check_midpoint_convexity(alpha, &t1, &t2)?;
        Ok(TrialData {
            records: vec![r],
            inputs: vec![
                ("A1", t1.a.into_matrix()),
                ("B1", t1.b.into_matrix()),
                ("X1", t1.x),
                ("A2", t2.a.into_matrix()),
                ("B2", t2.b.into_matrix()),
                ("X2", t2.x),
            ],
            channel: None,
        })
    })
}

fn run_fp(config: &TrialConfig) -> Collected {
    run_trials(config, CheckKind::Fp, &sub_two(&config.p_grid), |p, seed, _, _| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || {
            let mag = 10f64.powf(rng.random_range(-1.5..1.5));
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        };
        let (r, s) = (draw(), draw());
        let rec = check_fp_lemma(p, r, s)?;
        let scalar = |v: f64| ComplexMatrix::from_diag(&[v]);
        Ok(TrialData {
            records: vec![rec],
            inputs: vec![("r", scalar(r)), ("s", scalar(s))],
            channel: None,
        })
    })
}

fn run_integral(config: &TrialConfig) -> (Collected, Vec<String>) {
    let mut alphas: Vec<f64> = INTEGRAL_ALPHAS.iter().chain(&config.alpha_grid).copied().collect();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    let mut out = Collected::default();
    let mut notes = Vec::new();
    let mut trial = 0u64;
    let (mut supported, mut total) = (0usize, 0usize);
    let (mut worst_standard, mut best_reciprocal) = (0f64, f64::INFINITY);
    let push_error = |out: &mut Collected, param: f64, trial: u64, e: crate::error::Error| {
        out.errors.push(TrialError {
            check: CheckKind::Integral.name().to_string(),
            param,
            trial,
            trial_seed: 0,
            message: e.to_string(),
            numerical: e.is_numerical(),
        })
    };
    for &alpha in &alphas {
        for &s in &INTEGRAL_S {
            match check_integral_rep(alpha, s) {
                Ok(rep) => {
                    total += 1;
                    if rep.supports == Prefactor::SinOverPi {
                        supported += 1;
                    }
                    worst_standard = worst_standard.max(rep.rel_err_sin_over_pi);
                    best_reciprocal = best_reciprocal.min(rep.rel_err_pi_over_sin);
                    out.records.push(rep.record().with_trial(trial, 0));
                }
                Err(e) => push_error(&mut out, alpha, trial, e),
            }
            trial += 1;
        }
    }
    for &x in &H_LOG_POINTS {
        match check_h_log(x) {
            Ok(r) => out.records.push(r.with_trial(trial, 0)),
            Err(e) => push_error(&mut out, x, trial, e),
        }
        trial += 1;
    }
    notes.push(format!(
        "integral representation of s^(alpha-1): prefactor sin(alpha*pi)/pi reconstructs the target on {supported}/{total} \
         grid points (max relative error {worst_standard:.2e}); the reciprocal pi/sin(alpha*pi) does not \
         (smallest relative error {best_reciprocal:.2e})"
    ));
    (out, notes)
}

fn opmono_label(f: &ScalarFunction) -> (String, f64) {
    match f {
        ScalarFunction::GAlpha(a) => ("opmono.g_alpha".into(), *a),
        ScalarFunction::HLog => ("opmono.h_log".into(), 0.0),
        other => (format!("opmono.{}", other.name()), 0.0),
    }
}

fn run_opmono_for(config: &TrialConfig, functions: &[ScalarFunction]) -> Collected {
    let index: Vec<f64> = (0..functions.len()).map(|i| i as f64).collect();
    let mut out = run_trials(config, CheckKind::Opmono, &index, |i, seed, dim, k| {
        let f = &functions[i as usize];
        let (name, param) = opmono_label(f);
        let a = pd(dim, sub_seed(seed, 0));
        let d = sample_psd_increment(dim, sub_seed(seed, 1), k % 2 == 0);
        let b = a.add_scaled(1.0, &d);
        let gap = operator_monotone_gap(f, &a, &b)?;
        Ok(TrialData {
            records: vec![GapRecord::new(name, param, gap, 1.0).with_dim(dim)],
            inputs: vec![("A", a.into_matrix()), ("B", b.into_matrix())],
            channel: None,
        })
    });
    // Errors only know the function index; relabel them.
    for e in &mut out.errors {
        let (name, param) = opmono_label(&functions[e.param as usize]);
        e.check = name;
        e.param = param;
    }
    out
}

/// Samples ordered pairs `A ≤ A + D` with `A` positive definite and `D` alternately rank one
/// and full rank, recording the minimum eigenvalue of `f(A + D) − f(A)`.
pub fn check_operator_monotone(f: &ScalarFunction, config: &TrialConfig) -> Result<SuiteReport> {
    config.validate()?;
    f.validate()?;
    let start = Instant::now();
    let c = run_opmono_for(config, std::slice::from_ref(f));
    let mut report = SuiteReport::assemble(config.clone(), c.records, c.errors, c.dumps, Vec::new());
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Runs the selected check families. Per-trial failures are recorded, not propagated;
/// only an invalid configuration is an error.
pub fn run_suite(config: &TrialConfig, checks: &[CheckKind]) -> Result<SuiteReport> {
    config.validate()?;
    let start = Instant::now();
    let mut kinds = checks.to_vec();
    kinds.sort();
    kinds.dedup();
    let mut all = Collected::default();
    let mut notes = Vec::new();
    for kind in kinds {
        let c = match kind {
            CheckKind::Bcl => run_bcl(config),
            CheckKind::Key => run_key(config),
            CheckKind::Monotone => run_monotone(config),
            CheckKind::Convexity => run_convexity(config),
            CheckKind::Fp => run_fp(config),
            CheckKind::Integral => {
                let (c, n) = run_integral(config);
                notes.extend(n);
                c
            }
            CheckKind::Opmono => {
                let mut fs: Vec<ScalarFunction> = config.alpha_grid.iter().map(|&a| ScalarFunction::GAlpha(a)).collect();
                fs.push(ScalarFunction::HLog);
                run_opmono_for(config, &fs)
            }
        };
        all.extend(c);
    }
    let mut report = SuiteReport::assemble(config.clone(), all.records, all.errors, all.dumps, notes);
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> TrialConfig {
        TrialConfig {
            dim: 3,
            min_dim: Some(2),
            trials: 12,
            ..TrialConfig::default()
        }
    }

    #[test]
    fn suite_is_deterministic_and_thread_independent() {
        let cfg = small();
        let mut r1 = run_suite(&cfg, &CheckKind::ALL).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let mut r2 = pool.install(|| run_suite(&cfg, &CheckKind::ALL)).unwrap();
        r1.wall_clock_seconds = 0.0;
        r2.wall_clock_seconds = 0.0;
        assert_eq!(r1.to_json().unwrap(), r2.to_json().unwrap());
        assert!(r1.passed(), "{}", r1.summary_table());
        assert!(r1.notes[0].contains("sin(alpha*pi)/pi"));
    }

    #[test]
    fn violation_count_matches_records() {
        let r = run_suite(&small(), &[CheckKind::Bcl, CheckKind::Fp]).unwrap();
        let by_hand = r
            .records
            .iter()
            .filter(|g| g.normalized_gap < -r.config.tolerance_for(&g.check))
            .count();
        assert_eq!(r.violation_count(), by_hand);
        let bcl: Vec<_> = r.summary("bcl").collect();
        assert_eq!(bcl.len(), r.config.p_grid.len());
        assert!(bcl.iter().all(|s| s.records == 12));
    }

    #[test]
    fn single_trial_identity_record() {
        let cfg = TrialConfig {
            trials: 1,
            alpha_grid: vec![0.5],
            ..small()
        };
        let r = run_suite(&cfg, &[CheckKind::Monotone]).unwrap();
        let id: Vec<_> = r.records.iter().filter(|g| g.check == "monotone.identity").collect();
        assert_eq!(id.len(), 1);
        assert_eq!(id[0].gap, 0.0);
    }

    #[test]
    fn negative_control_produces_dumps() {
        let cfg = TrialConfig {
            trials: 100,
            ..small()
        };
        let r = check_operator_monotone(&ScalarFunction::Square, &cfg).unwrap();
        assert!(r.violation_count() > 0);
        assert_eq!(r.violations.len(), r.violation_count());
        let d = &r.violations[0];
        assert!(d.inputs.contains_key("A") && d.inputs.contains_key("B"));
    }
}
