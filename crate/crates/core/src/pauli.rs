//! Pauli-exclusion diagnostics: the vanishing of `(c_f^+)^2 |0>`, and
//! preparability of three-particle states in which a free fermion competes
//! with the fermionic constituent of a composite.
//!
//! A state is preparable when its squared norm before normalization is
//! nonzero, i.e. its normalization constant is finite.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{self, ThreeNormStatus, ThreeParticleNormReport};
use crate::fock::{Family, FockSpace, FockSpaceConfig, OperatorMatrix, StateVector};
use crate::mode_dist::{CompositeKind, DiscreteModeDistribution, SpinLabel, Statistics, ThreeParticleDistribution};
use crate::{Error, Result, DIVERGENCE_TOL, STRUCTURAL_TOL};

/// Agreement required between the analytic and oracle three-particle norms.
pub const ORACLE_TOL: f64 = 1e-12;

/// Squared norm of the antisymmetrized first-quantization tensor divided by
/// the squared norm of the second-quantization state.
pub const FIRST_QUANTIZATION_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Preparability {
    Preparable,
    ForbiddenByExclusion,
    /// The methods consulted disagree.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Method {
    SecondQuantization,
    FirstQuantization,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PreparabilityVerdict {
    pub status: Preparability,
    /// Squared norm of the unnormalized state (zero means excluded).
    pub evidence: f64,
    pub method: Method,
}

impl PreparabilityVerdict {
    fn from_norm(norm_sq: f64, method: Method) -> Self {
        let status = if norm_sq.abs() <= DIVERGENCE_TOL {
            Preparability::ForbiddenByExclusion
        } else {
            Preparability::Preparable
        };
        Self {
            status,
            evidence: norm_sq,
            method,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExclusionReport {
    pub kind: CompositeKind,
    /// Squared norm of `(c_f^+)^2 |0>` in the Fock space.
    pub norm_sq: f64,
    /// Every amplitude is exactly zero.
    pub exact_zero: bool,
    /// `2 (1 +- Lambda)` for BB and FF, zero for FB.
    pub predicted_norm_sq: f64,
    pub verdict: PreparabilityVerdict,
}

/// Builds `(c_f^+)^2 |0>` in `space` and classifies it.
pub fn exclusion_check(
    f: &DiscreteModeDistribution,
    kind: CompositeKind,
    space: &FockSpace,
) -> Result<ExclusionReport> {
    let cfg = space.config();
    if cfg.stat_a != kind.stat_a() || cfg.stat_b != kind.stat_b() {
        return Err(Error::SpaceMismatch);
    }
    let state = space.two_composite_state(f)?;
    let norm_sq = state.norm_sqr();
    let predicted_norm_sq = match kind {
        CompositeKind::FB => 0.0,
        _ => 2.0 * (1.0 + kind.pair_sign()? * algebra::lambda(f)),
    };
    Ok(ExclusionReport {
        kind,
        norm_sq,
        exact_zero: state.is_exact_zero(),
        predicted_norm_sq,
        verdict: PreparabilityVerdict::from_norm(norm_sq, Method::SecondQuantization),
    })
}

/// A composite of a fermion `a` and a distinguishable partner, plus a free
/// fermion of the same species in mode vector `free_fermion`: the state
/// `c_f^+ a_g^+ |0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeBodyScenario {
    composite: DiscreteModeDistribution,
    free_fermion: Vec<Complex64>,
    free_spin: SpinLabel,
}

impl ThreeBodyScenario {
    /// The free fermion's spin must equal the composite fermion's spin.
    pub fn new(
        composite: DiscreteModeDistribution,
        free_fermion: Vec<Complex64>,
        free_spin: SpinLabel,
    ) -> Result<Self> {
        if free_spin != composite.spin_a() {
            return Err(Error::SpinMismatch);
        }
        if free_fermion.len() != composite.na() {
            return Err(Error::ShapeMismatch {
                expected: (composite.na(), 1),
                found: (free_fermion.len(), 1),
            });
        }
        if free_fermion.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm: f64 = free_fermion.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            composite,
            free_fermion,
            free_spin,
        })
    }

    /// Like [`ThreeBodyScenario::new`] but normalizes the free-fermion vector.
    pub fn normalized(
        composite: DiscreteModeDistribution,
        free_fermion: Vec<Complex64>,
        free_spin: SpinLabel,
    ) -> Result<Self> {
        let norm: f64 = free_fermion.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::AllZero);
        }
        let g = free_fermion.into_iter().map(|z| z / norm).collect();
        Self::new(composite, g, free_spin)
    }

    pub fn composite(&self) -> &DiscreteModeDistribution {
        &self.composite
    }

    pub fn free_fermion(&self) -> &[Complex64] {
        &self.free_fermion
    }

    pub fn free_spin(&self) -> SpinLabel {
        self.free_spin
    }

    /// Fock space with a fermionic family `a` and a bosonic partner family `b`.
    pub fn oracle_space(&self) -> Result<FockSpace> {
        let f = &self.composite;
        FockSpace::build(
            FockSpaceConfig::new(f.na(), f.nb(), Statistics::Fermion, Statistics::Boson)
                .with_spins(&[f.spin_a()], &[f.spin_b()]),
        )
    }

    /// `c_f^+ a_g^+ |0>`, unnormalized.
    pub fn oracle_state(&self, space: &FockSpace) -> Result<StateVector> {
        let c = space.composite_creation(&self.composite)?;
        let ops = (0..self.composite.na())
            .map(|n| space.creation_op(Family::A, n, self.free_spin))
            .collect::<Result<Vec<_>>>()?;
        let terms: Vec<_> = self.free_fermion.iter().copied().zip(ops.iter()).collect();
        let a_g = OperatorMatrix::linear_combination(space, &terms)?;
        c.apply(&a_g.apply(&space.vacuum())?)
    }

    /// `||c_f^+ a_g^+ |0>||^2` from the Fock space.
    pub fn oracle_norm(&self) -> Result<f64> {
        let space = self.oracle_space()?;
        Ok(self.oracle_state(&space)?.norm_sqr())
    }

    /// Squared norm of `Psi_nmk - Psi_mnk` with `Psi_nmk = f_nk g_m`: the
    /// first-quantization wavefunction antisymmetrized over the two
    /// identical fermions.
    pub fn first_quantization_norm(&self) -> f64 {
        let f = &self.composite;
        let g = &self.free_fermion;
        let mut acc = 0.0;
        for n in 0..f.na() {
            for m in 0..f.na() {
                for k in 0..f.nb() {
                    acc += (f.get(n, k) * g[m] - f.get(m, k) * g[n]).norm_sqr();
                }
            }
        }
        acc
    }

    pub fn analytic_norm(&self) -> Result<ThreeParticleNormReport> {
        algebra::three_particle_norm(&self.composite, &self.free_fermion)
    }
}

/// Second-quantization verdict from the Fock-space norm.
pub fn scenario_verdict(s: &ThreeBodyScenario) -> Result<PreparabilityVerdict> {
    Ok(PreparabilityVerdict::from_norm(
        s.oracle_norm()?,
        Method::SecondQuantization,
    ))
}

/// First-quantization verdict from the antisymmetrized tensor norm.
pub fn first_quantization_verdict(s: &ThreeBodyScenario) -> PreparabilityVerdict {
    PreparabilityVerdict::from_norm(s.first_quantization_norm(), Method::FirstQuantization)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CrossCheck {
    pub second_quantization: PreparabilityVerdict,
    pub first_quantization: PreparabilityVerdict,
    pub analytic: ThreeParticleNormReport,
    /// `|first / FIRST_QUANTIZATION_FACTOR - second|`.
    pub formalism_residual: f64,
    /// `|analytic inverse_norm_sq - second|`.
    pub analytic_residual: f64,
    pub combined: PreparabilityVerdict,
}

impl CrossCheck {
    pub fn agrees(&self, tol: f64) -> bool {
        self.formalism_residual <= tol
            && self.analytic_residual <= tol
            && self.combined.status != Preparability::Indeterminate
    }
}

/// Evaluates a scenario in both formalisms and with the analytic formula.
pub fn cross_check(s: &ThreeBodyScenario) -> Result<CrossCheck> {
    let second = scenario_verdict(s)?;
    let first = first_quantization_verdict(s);
    let analytic = s.analytic_norm()?;
    let formalism_residual = (first.evidence / FIRST_QUANTIZATION_FACTOR - second.evidence).abs();
    let analytic_residual = (analytic.inverse_norm_sq - second.evidence).abs();
    let status = if first.status == second.status {
        second.status
    } else {
        Preparability::Indeterminate
    };
    Ok(CrossCheck {
        second_quantization: second,
        first_quantization: first,
        analytic,
        formalism_residual,
        analytic_residual,
        combined: PreparabilityVerdict {
            status,
            evidence: second.evidence,
            method: Method::Both,
        },
    })
}

/// Analytic three-particle norm, rejected unless it matches the Fock-space
/// norm within [`ORACLE_TOL`].
pub fn three_particle_norm_checked(s: &ThreeBodyScenario) -> Result<ThreeParticleNormReport> {
    let report = s.analytic_norm()?;
    let oracle = s.oracle_norm()?;
    if (report.inverse_norm_sq - oracle).abs() > ORACLE_TOL {
        return Err(Error::OracleMismatch {
            analytic: report.inverse_norm_sq,
            oracle,
        });
    }
    Ok(report)
}

/// `||sum f3_nmk a^+_{n,r} a^+_{m,s} b^+_k |0>||^2` from the Fock space.
pub fn helium_oracle_norm(f3: &ThreeParticleDistribution) -> Result<f64> {
    let nf = f3.n_fermion();
    let np = f3.n_partner();
    let space = FockSpace::build(
        FockSpaceConfig::new(nf, np, Statistics::Fermion, Statistics::Boson)
            .with_spins(&[f3.spin_r, f3.spin_s], &[f3.spin_partner]),
    )?;
    let a_r = (0..nf)
        .map(|n| space.creation_op(Family::A, n, f3.spin_r))
        .collect::<Result<Vec<_>>>()?;
    let a_s = (0..nf)
        .map(|m| space.creation_op(Family::A, m, f3.spin_s))
        .collect::<Result<Vec<_>>>()?;
    let b = (0..np)
        .map(|k| space.creation_op(Family::B, k, f3.spin_partner))
        .collect::<Result<Vec<_>>>()?;
    let vacuum = space.vacuum();
    let mut amps = vec![Complex64::new(0.0, 0.0); space.dim()];
    for (k, bk) in b.iter().enumerate() {
        let bk = bk.apply(&vacuum)?;
        for (m, as_m) in a_s.iter().enumerate() {
            let smk = as_m.apply(&bk)?;
            for (n, ar_n) in a_r.iter().enumerate() {
                let coeff = f3.get(n, m, k);
                if coeff == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let v = ar_n.apply(&smk)?;
                for (acc, x) in amps.iter_mut().zip(v.amplitudes()) {
                    *acc += coeff * x;
                }
            }
        }
    }
    Ok(StateVector::from_amplitudes(amps)?.norm_sqr())
}

/// Squared norm of the first-quantization wavefunction of two identical
/// fermions and a partner, antisymmetrized over the fermions' joint
/// (orbital, spin) labels: `Psi(n r, m s, k) - Psi(m s, n r, k)`.
pub fn helium_first_quantization_norm(f3: &ThreeParticleDistribution) -> f64 {
    let nf = f3.n_fermion();
    let spins = if f3.spin_r == f3.spin_s { 1 } else { 2 };
    // spin-orbital label (n, sigma) -> n * spins + sigma, with sigma 0 = r, 1 = s
    let width = nf * spins;
    let sigma_s = spins - 1;
    let psi = |x: usize, y: usize, k: usize| -> Complex64 {
        let (n, sx) = (x / spins, x % spins);
        let (m, sy) = (y / spins, y % spins);
        if sx == 0 && sy == sigma_s {
            f3.get(n, m, k)
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let mut acc = 0.0;
    for x in 0..width {
        for y in 0..width {
            for k in 0..f3.n_partner() {
                acc += (psi(x, y, k) - psi(y, x, k)).norm_sqr();
            }
        }
    }
    acc
}

/// Verdict from the analytic symmetric three-particle norm.
pub fn helium_verdict(f3: &ThreeParticleDistribution) -> Result<PreparabilityVerdict> {
    let report = algebra::symmetric_three_norm(f3)?;
    let status = match report.status {
        ThreeNormStatus::ExcludedByPauli | ThreeNormStatus::Divergent => Preparability::ForbiddenByExclusion,
        ThreeNormStatus::Finite { .. } => Preparability::Preparable,
    };
    Ok(PreparabilityVerdict {
        status,
        evidence: report.inverse_norm_sq,
        method: Method::SecondQuantization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn bb_single_mode_double_occupancy() {
        let f = DiscreteModeDistribution::from_real_rows(&[&[1.0]]).unwrap();
        let space = FockSpace::build(FockSpaceConfig::for_kind(CompositeKind::BB, 1, 1)).unwrap();
        let r = exclusion_check(&f, CompositeKind::BB, &space).unwrap();
        assert!((r.norm_sq - 4.0).abs() < 1e-14);
        assert_eq!(r.predicted_norm_sq, 4.0);
        assert_eq!(r.verdict.status, Preparability::Preparable);
    }

    #[test]
    fn fb_square_vanishes_exactly() {
        let f = DiscreteModeDistribution::from_real_rows(&[&[0.3, -0.5], &[0.7, 0.1]]).unwrap();
        let space = FockSpace::build(FockSpaceConfig::for_kind(CompositeKind::FB, 2, 2)).unwrap();
        let r = exclusion_check(&f, CompositeKind::FB, &space).unwrap();
        assert!(r.exact_zero);
        assert_eq!(r.verdict.status, Preparability::ForbiddenByExclusion);
    }

    #[test]
    fn ff_square_vanishes_only_when_separable() {
        let space = FockSpace::build(FockSpaceConfig::for_kind(CompositeKind::FF, 2, 2)).unwrap();
        let sep = DiscreteModeDistribution::from_real_rows(&[&[0.3, 0.4], &[0.6, 0.8]]).unwrap();
        let r = exclusion_check(&sep, CompositeKind::FF, &space).unwrap();
        assert!(r.norm_sq < 1e-28);
        let ent = DiscreteModeDistribution::from_real_rows(&[&[FRAC_1_SQRT_2, 0.0], &[0.0, FRAC_1_SQRT_2]]).unwrap();
        let r = exclusion_check(&ent, CompositeKind::FF, &space).unwrap();
        assert!((r.norm_sq - 1.0).abs() < 1e-14);
        assert!((r.predicted_norm_sq - 1.0).abs() < 1e-14);
    }

    #[test]
    fn separable_matching_marginal_is_forbidden() {
        let f = DiscreteModeDistribution::separable(&[c(0.6), c(0.8)], &[c(1.0), c(1.0)]).unwrap();
        let s = ThreeBodyScenario::new(f, vec![c(0.6), c(0.8)], SpinLabel(0)).unwrap();
        let x = cross_check(&s).unwrap();
        assert_eq!(x.combined.status, Preparability::ForbiddenByExclusion);
        assert!(x.agrees(1e-12));
    }

    #[test]
    fn orthogonal_marginal_has_unit_norm() {
        let f = DiscreteModeDistribution::separable(&[c(1.0), c(0.0)], &[c(1.0), c(2.0)]).unwrap();
        let s = ThreeBodyScenario::new(f, vec![c(0.0), c(1.0)], SpinLabel(0)).unwrap();
        assert!((s.oracle_norm().unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(scenario_verdict(&s).unwrap().status, Preparability::Preparable);
    }

    #[test]
    fn entangled_is_preparable_in_both_formalisms() {
        let f = DiscreteModeDistribution::from_real_rows(&[&[FRAC_1_SQRT_2, 0.0], &[0.0, FRAC_1_SQRT_2]]).unwrap();
        let s = ThreeBodyScenario::new(f, vec![c(1.0), c(0.0)], SpinLabel(0)).unwrap();
        let x = cross_check(&s).unwrap();
        assert_eq!(x.combined.status, Preparability::Preparable);
        assert!((x.second_quantization.evidence - 0.5).abs() < 1e-14);
        assert!((x.first_quantization.evidence - 1.0).abs() < 1e-14);
        assert!(x.agrees(1e-12));
        three_particle_norm_checked(&s).unwrap();
    }

    #[test]
    fn spin_mismatch_rejected() {
        let f = DiscreteModeDistribution::from_real_rows(&[&[1.0]]).unwrap();
        assert_eq!(
            ThreeBodyScenario::new(f, vec![c(1.0)], SpinLabel(1)),
            Err(Error::SpinMismatch)
        );
    }

    #[test]
    fn helium_cases_match_oracle() {
        let e = vec![c(0.5), c(0.1), c(0.3), c(-0.2), c(0.3), c(-0.2), c(0.4), c(0.6)];
        for (r, s, expected) in [(0, 0, 0.0), (0, 1, 1.0), (1, 0, 1.0)] {
            let f3 = ThreeParticleDistribution::normalize(2, 2, e.clone(), SpinLabel(r), SpinLabel(s)).unwrap();
            let oracle = helium_oracle_norm(&f3).unwrap();
            assert!((oracle - expected).abs() < 1e-14, "{r}{s}: {oracle}");
            let v = helium_verdict(&f3).unwrap();
            assert!((v.evidence - expected).abs() < 1e-14);
            let first = helium_first_quantization_norm(&f3);
            assert!((first - FIRST_QUANTIZATION_FACTOR * expected).abs() < 1e-14);
        }
    }
}
