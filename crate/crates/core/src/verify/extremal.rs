use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::checks::bcl_gap;
use super::ensemble::{derive_seed, sample_matrix};
use super::report::{inputs_digest, GapRecord};
use super::Ensemble;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

const EXTREMAL_STREAM: u64 = 0xE7;
const INITIAL_STEP: f64 = 0.1;
const STEP_FLOOR: f64 = 1e-9;
const PATIENCE: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub best: GapRecord,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub restart: usize,
    pub evaluations: usize,
    pub accepted: usize,
}

fn normalized(a: &ComplexMatrix, b: &ComplexMatrix, p: f64) -> Result<f64> {
    let (gap, norm) = bcl_gap(a, b, p)?;
    Ok(if norm > 0.0 { gap / norm } else { 0.0 })
}

/// Random-restart hill climbing on the normalized gap of the norm inequality.
///
/// Restart 0 starts from `A = I`, `B = diag(0.1, −0.1, 0, …)`; the others from Ginibre
/// pairs. Each step adds Gaussian noise (scaled by the step and the current entry scale)
/// to the real or imaginary part of one entry of `A` or `B` and keeps it if the gap drops.
/// The step halves after 20 consecutive rejections, never below `1e−9`.
pub fn extremal_search(p: f64, dim: usize, iters: usize, restarts: usize, master_seed: u64) -> Result<ExtremalResult> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::parameter("p", p, "must exceed 1"));
    }
    if dim < 2 {
        return Err(Error::parameter("dim", dim as f64, "must be at least 2"));
    }
    if iters == 0 || restarts == 0 {
        return Err(Error::parameter("iters", iters.min(restarts) as f64, "iters and restarts must be at least 1"));
    }
    let mut best: Option<ExtremalResult> = None;
    let mut evaluations = 0;
    let mut accepted = 0;
    for r in 0..restarts {
        let seed = derive_seed(master_seed, EXTREMAL_STREAM, 0, r as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut a, mut b) = if r == 0 {
            let mut diag = vec![0.0; dim];
            diag[0] = 0.1;
            diag[1] = -0.1;
            (ComplexMatrix::identity(dim), ComplexMatrix::from_diag(&diag))
        } else {
            (
                sample_matrix(Ensemble::ComplexGinibre, dim, rng.random()),
                sample_matrix(Ensemble::ComplexGinibre, dim, rng.random()),
            )
        };
        let mut current = normalized(&a, &b, p)?;
        evaluations += 1;
        if current != 0.0 {
            let mut step = INITIAL_STEP;
            let mut rejections = 0;
            for _ in 0..iters {
                let on_a = rng.random_bool(0.5);
                let target = if on_a { &a } else { &b };
                let (row, col) = (rng.random_range(0..dim), rng.random_range(0..dim));
                let scale = target.frobenius_norm().max(1e-300) / dim as f64;
                let z: f64 = rng.sample(StandardNormal);
                let delta = z * step * scale;
                let shift = if rng.random_bool(0.5) {
                    Complex64::new(delta, 0.0)
                } else {
                    Complex64::new(0.0, delta)
                };
                let mut trial = target.clone();
                trial[(row, col)] += shift;
                let value = if on_a { normalized(&trial, &b, p)? } else { normalized(&a, &trial, p)? };
                evaluations += 1;
                if value < current {
                    current = value;
                    if on_a {
                        a = trial;
                    } else {
                        b = trial;
                    }
                    rejections = 0;
                    accepted += 1;
                } else {
                    rejections += 1;
                    if rejections >= PATIENCE {
                        step = (step / 2.0).max(STEP_FLOOR);
                        rejections = 0;
                    }
                }
            }
        }
        if best.as_ref().is_none_or(|b| current < b.best.normalized_gap) {
            let (gap, norm) = bcl_gap(&a, &b, p)?;
            let record = GapRecord::new("extremal", p, gap, norm)
                .with_trial(r as u64, seed)
                .with_dim(dim)
                .with_digest(&inputs_digest(p, &[&a, &b]));
            best = Some(ExtremalResult {
                best: record,
                a,
                b,
                restart: r,
                evaluations: 0,
                accepted: 0,
            });
        }
    }
    let mut out = best.expect("at least one restart");
    out.evaluations = evaluations;
    out.accepted = accepted;
    Ok(out)
}
