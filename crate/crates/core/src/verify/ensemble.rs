use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::Ensemble;
use crate::error::Result;
use crate::linalg::{eigh, ComplexMatrix, SelfAdjointMatrix};
use crate::tolerance::Tolerances;

pub const GENERATOR: &str = "ChaCha8 (rand_chacha 0.9, seed_from_u64); complex normals with unit variance per real and imaginary part, scaled by 1/sqrt(2)";

pub const SEED_RULE: &str = "trial_seed = splitmix64(master_seed + 0x9E3779B97F4A7C15 * (stream + 1)), \
stream = (check << 48) | (param_index << 32) | trial; matrix k of a trial uses splitmix64(trial_seed + 0x9E3779B97F4A7C15 * (k + 1))";

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based seed for trial `trial` of parameter `param_index` of check stream `check`.
pub fn derive_seed(master_seed: u64, check: u64, param_index: u64, trial: u64) -> u64 {
    let stream = (check << 48) | ((param_index & 0xFFFF) << 32) | (trial & 0xFFFF_FFFF);
    splitmix64(master_seed.wrapping_add(GOLDEN.wrapping_mul(stream.wrapping_add(1))))
}

/// Seed of the `k`-th object drawn inside one trial.
pub fn sub_seed(trial_seed: u64, k: u64) -> u64 {
    splitmix64(trial_seed.wrapping_add(GOLDEN.wrapping_mul(k + 1)))
}

fn ginibre(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * s, im * s)
    })
}

pub fn sample_matrix(ensemble: Ensemble, dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(dim, &mut rng);
    match ensemble {
        Ensemble::ComplexGinibre => g,
        Ensemble::SelfAdjoint => g.hermitian_part(),
        Ensemble::PositiveDefinite => {
            let delta = Tolerances::DEFAULT.positive_definite_shift;
            (&(&g * &g.adjoint()) + &ComplexMatrix::identity(dim).scale_real(delta)).hermitian_part()
        }
    }
}

/// Self-adjoint draw with every eigenvalue moved away from zero by `margin`, keeping its sign.
pub fn sample_indefinite_invertible(dim: usize, seed: u64, margin: f64) -> Result<SelfAdjointMatrix> {
    let h = SelfAdjointMatrix::hermitize(&sample_matrix(Ensemble::SelfAdjoint, dim, seed));
    let d = eigh(&h, Some(0.0))?;
    Ok(d.apply_real(|x| if x < 0.0 { x - margin } else { x + margin }))
}

/// PSD increment: rank one `vv*` when `rank_one`, else `GG*`.
pub fn sample_psd_increment(dim: usize, seed: u64, rank_one: bool) -> SelfAdjointMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(dim, &mut rng);
    let m = if rank_one {
        let v = ComplexMatrix::from_fn(dim, 1, |r, _| g[(r, 0)]);
        &v * &v.adjoint()
    } else {
        &g * &g.adjoint()
    };
    SelfAdjointMatrix::hermitize(&m)
}
