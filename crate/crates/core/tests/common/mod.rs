#![allow(dead_code)]

use composite_core::mode_dist::{DiscreteModeDistribution, SpinLabel};
use composite_core::sample;
use composite_core::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_f(rng: &mut ChaCha8Rng, na: usize, nb: usize) -> DiscreteModeDistribution {
    sample::random_distribution(rng, na, nb, SpinLabel(0), SpinLabel(0)).unwrap()
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Eigenvalues of `f f^dagger` by nalgebra, square-rooted and sorted descending.
pub fn schmidt_oracle(f: &DiscreteModeDistribution) -> Vec<f64> {
    let (na, nb) = f.shape();
    let m = nalgebra::DMatrix::from_fn(na, nb, |i, j| f.get(i, j));
    let rho = &m * m.adjoint();
    let eig = nalgebra::SymmetricEigen::new(rho);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().map(|&x| x.max(0.0).sqrt()).collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    vals.truncate(na.min(nb));
    vals
}
