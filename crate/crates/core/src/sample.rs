//! Seeded random mode distributions for tests and verification suites.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::mode_dist::{DiscreteModeDistribution, SpinLabel, ThreeParticleDistribution};
use crate::Result;

/// Standard complex normal variate (Box-Muller).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    let r = (-2.0 * u.ln()).sqrt();
    Complex64::from_polar(r, 2.0 * PI * v)
}

/// Uniformly distributed unit vector in `C^n`.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Normalized distribution with independent complex normal entries.
pub fn random_distribution<R: Rng + ?Sized>(
    rng: &mut R,
    na: usize,
    nb: usize,
    spin_a: SpinLabel,
    spin_b: SpinLabel,
) -> Result<DiscreteModeDistribution> {
    let entries = (0..na * nb).map(|_| complex_normal(rng)).collect();
    DiscreteModeDistribution::normalize(na, nb, entries, spin_a, spin_b)
}

/// Random three-particle tensor. With `exchange_sign = Some(s)` the tensor
/// satisfies `f3[n][m][k] = s f3[m][n][k]`.
pub fn random_three_particle<R: Rng + ?Sized>(
    rng: &mut R,
    n_fermion: usize,
    n_partner: usize,
    exchange_sign: Option<f64>,
    spin_r: SpinLabel,
    spin_s: SpinLabel,
) -> Result<ThreeParticleDistribution> {
    let len = n_fermion * n_fermion * n_partner;
    let raw: Vec<Complex64> = (0..len).map(|_| complex_normal(rng)).collect();
    let idx = |n: usize, m: usize, k: usize| (n * n_fermion + m) * n_partner + k;
    let entries = match exchange_sign {
        None => raw,
        Some(sign) => {
            let mut out = alloc::vec![Complex64::new(0.0, 0.0); len];
            for n in 0..n_fermion {
                for m in 0..n_fermion {
                    for k in 0..n_partner {
                        out[idx(n, m, k)] = raw[idx(n, m, k)] + raw[idx(m, n, k)] * sign;
                    }
                }
            }
            out
        }
    };
    ThreeParticleDistribution::normalize(n_fermion, n_partner, entries, spin_r, spin_s)
}
