//! Analytic discrete-mode formulas for composite operators.
//!
//! With `c_f^+ = sum f_nm a_n^+ b_m^+` the composite (anti)commutators are
//!
//! ```text
//! [c_f, c_g^+]_BB = theta 1 + theta_a + theta_b
//! [c_f, c_g^+]_FF = theta 1 - theta_a - theta_b
//! {c_f, c_g^+}_FB = theta 1 - theta_a + theta_b
//! ```
//!
//! where `theta = <f|g>` and `theta_a`, `theta_b` are one-body operators
//! built from the partial overlaps of `f` and `g`. The deviation operators
//! measure how far the composite is from an elementary boson or fermion.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fock::{Family, FockSpace, OperatorMatrix};
use crate::mode_dist::{CompositeKind, DiscreteModeDistribution, ThreeParticleDistribution};
use crate::{numeric, Error, Result, DIVERGENCE_TOL, STRUCTURAL_TOL};

/// Imaginary residue tolerated on quantities that must be real.
const REALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "status"))]
pub enum NormStatus {
    /// Squared normalization constant `N^2`.
    Finite {
        value: f64,
    },
    Divergent,
}

impl NormStatus {
    pub fn value(self) -> Option<f64> {
        match self {
            NormStatus::Finite { value } => Some(value),
            NormStatus::Divergent => None,
        }
    }
}

/// A real expectation value, or the `0/0` form met at divergent normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "status"))]
pub enum Expectation {
    Value { value: f64 },
    Indeterminate,
}

impl Expectation {
    pub fn value(self) -> Option<f64> {
        match self {
            Expectation::Value { value } => Some(value),
            Expectation::Indeterminate => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DeviationReport {
    pub kind: CompositeKind,
    #[cfg_attr(feature = "serde", serde(with = "complex_pair"))]
    pub theta: Complex64,
    pub lambda_value: f64,
    pub norm_status: NormStatus,
    pub exp_theta_a: Expectation,
    pub exp_theta_b: Expectation,
}

#[cfg(feature = "serde")]
mod complex_pair {
    use num_complex::Complex64;

    pub fn serialize<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&[z.re, z.im], s)
    }
}

/// `theta_a = sum_{n,N,m} f*_nm g_Nm a^+_{N,R} a_{n,r}`, times `delta_{sS}`.
pub fn theta_op_a<'s>(
    f: &DiscreteModeDistribution,
    g: &DiscreteModeDistribution,
    space: &'s FockSpace,
) -> Result<OperatorMatrix<'s>> {
    space.check_shape(f)?;
    space.check_shape(g)?;
    if f.spin_b() != g.spin_b() {
        return Ok(OperatorMatrix::zero(space));
    }
    let (na, nb) = f.shape();
    let mut coeffs = alloc::vec![Complex64::new(0.0, 0.0); na * na];
    for n in 0..na {
        for big_n in 0..na {
            coeffs[big_n * na + n] = (0..nb).map(|m| f.get(n, m).conj() * g.get(big_n, m)).sum();
        }
    }
    one_body(space, Family::A, f.spin_a(), g.spin_a(), na, &coeffs)
}

/// `theta_b = sum_{n,m,M} f*_nm g_nM b^+_{M,S} b_{m,s}`, times `delta_{rR}`.
pub fn theta_op_b<'s>(
    f: &DiscreteModeDistribution,
    g: &DiscreteModeDistribution,
    space: &'s FockSpace,
) -> Result<OperatorMatrix<'s>> {
    space.check_shape(f)?;
    space.check_shape(g)?;
    if f.spin_a() != g.spin_a() {
        return Ok(OperatorMatrix::zero(space));
    }
    let (na, nb) = f.shape();
    let mut coeffs = alloc::vec![Complex64::new(0.0, 0.0); nb * nb];
    for m in 0..nb {
        for big_m in 0..nb {
            coeffs[big_m * nb + m] = (0..na).map(|n| f.get(n, m).conj() * g.get(n, big_m)).sum();
        }
    }
    one_body(space, Family::B, f.spin_b(), g.spin_b(), nb, &coeffs)
}

/// `sum_{to,from} coeffs[to * n + from] x^+_{to,spin_to} x_{from,spin_from}`.
fn one_body<'s>(
    space: &'s FockSpace,
    family: Family,
    spin_from: crate::mode_dist::SpinLabel,
    spin_to: crate::mode_dist::SpinLabel,
    n: usize,
    coeffs: &[Complex64],
) -> Result<OperatorMatrix<'s>> {
    let creators = (0..n)
        .map(|k| space.creation_op(family, k, spin_to))
        .collect::<Result<Vec<_>>>()?;
    let annihilators = (0..n)
        .map(|k| space.annihilation_op(family, k, spin_from))
        .collect::<Result<Vec<_>>>()?;
    let mut products = Vec::new();
    for to in 0..n {
        for from in 0..n {
            let c = coeffs[to * n + from];
            if c != Complex64::new(0.0, 0.0) {
                products.push((c, creators[to].mul(&annihilators[from])?));
            }
        }
    }
    let terms: Vec<_> = products.iter().map(|(c, op)| (*c, op)).collect();
    OperatorMatrix::linear_combination(space, &terms)
}

/// Signs `(s_a, s_b)` of `theta_a`, `theta_b` in the composite relation.
pub fn deviation_signs(kind: CompositeKind) -> (f64, f64) {
    match kind {
        CompositeKind::BB => (1.0, 1.0),
        CompositeKind::FF => (-1.0, -1.0),
        CompositeKind::FB => (-1.0, 1.0),
    }
}

/// Whether the composite relation for `kind` uses an anticommutator.
pub fn uses_anticommutator(kind: CompositeKind) -> bool {
    kind == CompositeKind::FB
}

/// `theta 1 + s_a theta_a + s_b theta_b`, the analytic value of the
/// composite (anti)commutator `[c_f, c_g^+]`.
pub fn composite_relation_rhs<'s>(
    f: &DiscreteModeDistribution,
    g: &DiscreteModeDistribution,
    kind: CompositeKind,
    space: &'s FockSpace,
) -> Result<OperatorMatrix<'s>> {
    let theta = f.inner_product(g)?;
    let ta = theta_op_a(f, g, space)?;
    let tb = theta_op_b(f, g, space)?;
    let (sa, sb) = deviation_signs(kind);
    let id = space.identity();
    OperatorMatrix::linear_combination(
        space,
        &[
            (theta, &id),
            (Complex64::new(sa, 0.0), &ta),
            (Complex64::new(sb, 0.0), &tb),
        ],
    )
}

/// Four-fold overlap `Lambda = sum f*_NM f_Nm f*_nm f_nM = tr (f f^dagger)^2`.
pub fn lambda(f: &DiscreteModeDistribution) -> f64 {
    let rho = f.reduced_density_a();
    // rho is Hermitian, so tr(rho^2) is the squared Frobenius norm
    rho.iter().map(|z| z.norm_sqr()).sum()
}

/// Squared normalization of `|2_f> = N (c_f^+)^2 |0>`: `N^2 = 1 / (2 (1 +- Lambda))`.
pub fn two_composite_norm(f: &DiscreteModeDistribution, kind: CompositeKind) -> Result<NormStatus> {
    let sign = kind.pair_sign()?;
    Ok(norm_from_overlap(lambda(f), sign))
}

pub(crate) fn norm_from_overlap(overlap: f64, sign: f64) -> NormStatus {
    let denom = 1.0 + sign * overlap;
    if sign < 0.0 && denom.abs() <= DIVERGENCE_TOL {
        NormStatus::Divergent
    } else {
        NormStatus::Finite {
            value: 1.0 / (2.0 * denom),
        }
    }
}

/// How the six-index contraction `sum F G` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contraction {
    /// Each kernel term factored into chained `na x na` matrix products.
    Chained,
    /// Direct six-fold loop. Reference only; cost grows as `na^3 nb^3`.
    Naive,
}

/// `sum_{n,N,k,m,M,l} F G` with `F = f*_nm f*_NM f*_kl` and
/// `G = 2 f_kM f_Nl f_nm + 2 f_km f_nl f_NM +- 2 f_km f_nM f_Nl +- 2 f_kM f_Nm f_nl`.
pub fn deviation_contraction(
    f: &DiscreteModeDistribution,
    kind: CompositeKind,
    method: Contraction,
) -> Result<Complex64> {
    let sign = kind.pair_sign()?;
    Ok(match method {
        Contraction::Chained => contraction_chained(f, sign),
        Contraction::Naive => contraction_naive(f, sign),
    })
}

fn contraction_chained(f: &DiscreteModeDistribution, sign: f64) -> Complex64 {
    let (na, nb) = f.shape();
    let entries = f.entries();
    let adj = numeric::adjoint(entries, na, nb);
    let norm = numeric::trace(&numeric::matmul(&adj, entries, nb, na, nb), nb);
    let rho = numeric::matmul(entries, &adj, na, nb, na);
    let rho2 = numeric::matmul(&rho, &rho, na, na, na);
    let rho3 = numeric::matmul(&rho2, &rho, na, na, na);
    // sum_nm f*_nm f_nm * sum f*_NM f_kM f*_kl f_Nl
    let t1 = norm * numeric::trace(&rho2, na);
    // sum_NM f*_NM f_NM * sum f*_nm f_km f*_kl f_nl
    let t2 = norm * numeric::trace(&rho2, na);
    // rho_kn rho_nN rho_Nk, and rho_Nn rho_nk rho_kN
    let t3 = numeric::trace(&rho3, na);
    let t4 = numeric::trace(&rho3, na);
    (t1 + t2 + (t3 + t4) * sign) * 2.0
}

fn contraction_naive(f: &DiscreteModeDistribution, sign: f64) -> Complex64 {
    let (na, nb) = f.shape();
    let v = |n: usize, m: usize| f.get(n, m);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..na {
        for big_n in 0..na {
            for k in 0..na {
                for m in 0..nb {
                    for big_m in 0..nb {
                        for l in 0..nb {
                            let kernel_f = v(n, m).conj() * v(big_n, big_m).conj() * v(k, l).conj();
                            let g1 = v(k, big_m) * v(big_n, l) * v(n, m);
                            let g2 = v(k, m) * v(n, l) * v(big_n, big_m);
                            let g3 = v(k, m) * v(n, big_m) * v(big_n, l);
                            let g4 = v(k, big_m) * v(big_n, m) * v(n, l);
                            acc += kernel_f * (g1 + g2 + (g3 + g4) * sign) * 2.0;
                        }
                    }
                }
            }
        }
    }
    acc
}

fn require_real(z: Complex64) -> Result<f64> {
    if z.im.abs() > REALITY_TOL * z.re.abs().max(1.0) {
        return Err(Error::NumericalError("expectation value has an imaginary residue"));
    }
    Ok(z.re)
}

/// Normalization and deviation expectation values on `|2_f>` for BB or FF.
///
/// `<theta_b>` is evaluated as `<theta_a>` of the transposed distribution, so
/// the equality of the two is an actual check rather than a copy.
pub fn deviation_expectations(f: &DiscreteModeDistribution, kind: CompositeKind) -> Result<DeviationReport> {
    let sign = kind.pair_sign()?;
    let lambda_value = lambda(f);
    let norm_status = norm_from_overlap(lambda_value, sign);
    let theta = f.inner_product(f)?;
    let (exp_theta_a, exp_theta_b) = match norm_status {
        NormStatus::Divergent => (Expectation::Indeterminate, Expectation::Indeterminate),
        NormStatus::Finite { value } => {
            let a = require_real(contraction_chained(f, sign) * value)?;
            let b = require_real(contraction_chained(&f.transposed(), sign) * value)?;
            (Expectation::Value { value: a }, Expectation::Value { value: b })
        }
    };
    Ok(DeviationReport {
        kind,
        theta,
        lambda_value,
        norm_status,
        exp_theta_a,
        exp_theta_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "status"))]
pub enum ThreeNormStatus {
    /// Squared normalization constant.
    Finite {
        value: f64,
    },
    Divergent,
    /// Norm vanishes because two identical fermions share spin and an
    /// exchange-symmetric amplitude.
    ExcludedByPauli,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ThreeParticleNormReport {
    /// Squared norm of the unnormalized state, `N^{-2}`.
    pub inverse_norm_sq: f64,
    pub status: ThreeNormStatus,
    /// The literal continuous/discrete expression for the three-particle
    /// normalization, before any sign convention is applied.
    pub raw_expression: f64,
    pub convention_note: String,
}

pub const FREE_FERMION_CONVENTION: &str = "||c_f^+ a_g^+|0>||^2 = 1 - sum f*_nm f_Nm g*_N g_n; \
the raw expression -1 + sum(...) equals minus this squared norm, so inverse_norm_sq = -raw_expression \
(exponent -2, global sign -1), confirmed against the Fock-space oracle";

pub const SYMMETRIC_CONVENTION: &str = "sum f3*_nmk (f3_nmk - f3_mnk delta_rs) equals the squared norm of \
sum f3_nmk a^+_{n,r} a^+_{m,s} b^+_k |0> directly (exponent -2, sign +1), confirmed against the Fock-space oracle";

/// Normalization of `c_f^+ a_g^+ |0>`: a composite of one fermion `a` and a
/// distinguishable partner, plus a free fermion `g` of the same species and
/// spin.
pub fn three_particle_norm(f: &DiscreteModeDistribution, g: &[Complex64]) -> Result<ThreeParticleNormReport> {
    let (na, nb) = f.shape();
    if g.len() != na {
        return Err(Error::ShapeMismatch {
            expected: (na, 1),
            found: (g.len(), 1),
        });
    }
    let g_norm: f64 = g.iter().map(|z| z.norm_sqr()).sum();
    if (g_norm - 1.0).abs() > STRUCTURAL_TOL {
        return Err(Error::NotNormalized(g_norm));
    }
    let mut overlap = Complex64::new(0.0, 0.0);
    for n in 0..na {
        for big_n in 0..na {
            let gg = g[big_n].conj() * g[n];
            for m in 0..nb {
                overlap += f.get(n, m).conj() * f.get(big_n, m) * gg;
            }
        }
    }
    let overlap = require_real(overlap)?;
    let raw_expression = -1.0 + overlap;
    let inverse_norm_sq = 1.0 - overlap;
    // the free fermion shares species and spin with the composite's fermion
    let status = if inverse_norm_sq.abs() <= DIVERGENCE_TOL {
        ThreeNormStatus::ExcludedByPauli
    } else {
        ThreeNormStatus::Finite {
            value: 1.0 / inverse_norm_sq,
        }
    };
    Ok(ThreeParticleNormReport {
        inverse_norm_sq,
        status,
        raw_expression,
        convention_note: String::from(FREE_FERMION_CONVENTION),
    })
}

/// `N^{-2} = sum f3*_nmk (f3_nmk - f3_mnk delta_rs)` for two identical
/// fermions and a distinguishable partner, all mutually entangled.
pub fn symmetric_three_norm(f3: &ThreeParticleDistribution) -> Result<ThreeParticleNormReport> {
    let n = f3.n_fermion();
    let k_max = f3.n_partner();
    let delta = f3.spin_r.delta(f3.spin_s);
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            for k in 0..k_max {
                acc += f3.get(a, b, k).conj() * (f3.get(a, b, k) - f3.get(b, a, k) * delta);
            }
        }
    }
    let value = require_real(acc)?;
    let status = if value.abs() <= DIVERGENCE_TOL && delta == 1.0 {
        ThreeNormStatus::ExcludedByPauli
    } else if value.abs() <= DIVERGENCE_TOL {
        ThreeNormStatus::Divergent
    } else {
        ThreeNormStatus::Finite { value: 1.0 / value }
    };
    Ok(ThreeParticleNormReport {
        inverse_norm_sq: value,
        status,
        raw_expression: value,
        convention_note: String::from(SYMMETRIC_CONVENTION),
    })
}
