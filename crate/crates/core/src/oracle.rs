//! Entrywise comparison of the analytic composite-operator formulas with
//! their brute-force Fock-space matrices.

use num_complex::Complex64;

use crate::algebra::{self, Contraction, NormStatus};
use crate::fock::{commutator, expectation, FockSpace, FockSpaceConfig, OperatorMatrix};
use crate::mode_dist::{CompositeKind, DiscreteModeDistribution, SpinLabel};
use crate::{Error, Result};

/// Spaces up to this dimension are built without a quanta cap.
pub const FULL_SPACE_MAX_DIM: u128 = 4096;

/// Per-family quanta cap used for larger relation spaces. Truncation-safe
/// columns then carry at most two quanta per family.
pub const RELATION_QUANTA_CAP: usize = 3;

/// Fock space for checking relations between `c_f` and `c_g` of the given
/// kind, representing every spin label that occurs in either.
pub fn relation_space(
    kind: CompositeKind,
    f: &DiscreteModeDistribution,
    g: &DiscreteModeDistribution,
    dim_limit: usize,
) -> Result<FockSpace> {
    if f.shape() != g.shape() {
        return Err(Error::ShapeMismatch {
            expected: f.shape(),
            found: g.shape(),
        });
    }
    let config = FockSpaceConfig::for_kind(kind, f.na(), f.nb())
        .with_spins(&[f.spin_a(), g.spin_a()], &[f.spin_b(), g.spin_b()])
        .with_dim_limit(dim_limit);
    let config = if config.dimension() <= FULL_SPACE_MAX_DIM {
        config
    } else {
        config.with_quanta_cap(RELATION_QUANTA_CAP)
    };
    FockSpace::build(config)
}

/// Largest entrywise residuals of the composite relations on the
/// truncation-safe columns of a space.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RelationResiduals {
    pub kind: CompositeKind,
    /// `[c_f, c_g]` (anticommutator for FB) against zero.
    pub annihilators: f64,
    /// `[c_f^+, c_g^+]` (anticommutator for FB) against zero.
    pub creators: f64,
    /// `[c_f, c_g^+]` against `theta 1 +- theta_a +- theta_b`.
    pub mixed: f64,
    /// `|<0| c_f c_g^+ |0> - theta|`.
    pub theta: f64,
    pub dim: usize,
    pub safe_columns: usize,
}

impl RelationResiduals {
    pub fn max(&self) -> f64 {
        self.annihilators.max(self.creators).max(self.mixed).max(self.theta)
    }
}

/// Checks every composite relation for `f`, `g` in `space`. With
/// `flip_theta` the analytic right-hand side uses `-theta`, which must make
/// the check fail whenever `theta != 0`.
pub fn relation_residuals(
    f: &DiscreteModeDistribution,
    g: &DiscreteModeDistribution,
    kind: CompositeKind,
    space: &FockSpace,
    flip_theta: bool,
) -> Result<RelationResiduals> {
    let safe = space.truncation_safe_columns();
    let anti = algebra::uses_anticommutator(kind);
    let cf_dag = space.composite_creation(f)?;
    let cg_dag = space.composite_creation(g)?;
    let cf = cf_dag.adjoint();
    let cg = cg_dag.adjoint();
    let zero = OperatorMatrix::zero(space);

    let annihilators = commutator(&cf, &cg, anti)?.max_abs_diff_on_columns(&zero, &safe)?;
    let creators = commutator(&cf_dag, &cg_dag, anti)?.max_abs_diff_on_columns(&zero, &safe)?;

    let mut rhs = algebra::composite_relation_rhs(f, g, kind, space)?;
    let theta = f.inner_product(g)?;
    if flip_theta {
        rhs = rhs.sub(&space.identity().scaled(theta * 2.0))?;
    }
    let mixed = commutator(&cf, &cg_dag, anti)?.max_abs_diff_on_columns(&rhs, &safe)?;

    let vacuum = space.vacuum();
    let theta_oracle = cf_dag.apply(&vacuum)?.inner(&cg_dag.apply(&vacuum)?)?;

    Ok(RelationResiduals {
        kind,
        annihilators,
        creators,
        mixed,
        theta: (theta_oracle - theta).norm(),
        dim: space.dim(),
        safe_columns: safe.iter().filter(|&&s| s).count(),
    })
}

/// Analytic two-composite quantities next to their Fock-space values.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExpectationComparison {
    pub kind: CompositeKind,
    pub lambda: f64,
    /// `||(c_f^+)^2 |0>||^2` in the Fock space.
    pub oracle_norm_sq: f64,
    /// `2 (1 +- Lambda)`.
    pub analytic_norm_sq: f64,
    pub oracle_theta_a: f64,
    pub oracle_theta_b: f64,
    pub chained_theta_a: f64,
    pub chained_theta_b: f64,
    pub naive: f64,
}

impl ExpectationComparison {
    pub fn max_residual(&self) -> f64 {
        let a = self.oracle_theta_a;
        let b = self.oracle_theta_b;
        (self.oracle_norm_sq - self.analytic_norm_sq)
            .abs()
            .max((a - self.chained_theta_a).abs())
            .max((b - self.chained_theta_b).abs())
            .max((a - self.naive).abs())
            .max((b - self.naive).abs())
    }
}

/// Fock space holding `|2_f>` exactly: single spin labels, cutoff 2.
pub fn two_composite_space(kind: CompositeKind, f: &DiscreteModeDistribution, dim_limit: usize) -> Result<FockSpace> {
    FockSpace::build(
        FockSpaceConfig::for_kind(kind, f.na(), f.nb())
            .with_spins(&[f.spin_a()], &[f.spin_b()])
            .with_dim_limit(dim_limit),
    )
}

/// Compares normalization and `<theta_a>`, `<theta_b>` on `|2_f>` between
/// the analytic contractions and the Fock space. Fails with
/// [`Error::ZeroState`] when `|2_f>` vanishes.
pub fn expectation_comparison(
    f: &DiscreteModeDistribution,
    kind: CompositeKind,
    space: &FockSpace,
) -> Result<ExpectationComparison> {
    let report = algebra::deviation_expectations(f, kind)?;
    let n2 = match report.norm_status {
        NormStatus::Finite { value } => value,
        NormStatus::Divergent => return Err(Error::ZeroState),
    };
    let state = space.two_composite_state(f)?;
    let ta = algebra::theta_op_a(f, f, space)?;
    let tb = algebra::theta_op_b(f, f, space)?;
    let real = |z: Complex64| z.re;
    let naive = algebra::deviation_contraction(f, kind, Contraction::Naive)? * n2;
    let sign = kind.pair_sign()?;
    Ok(ExpectationComparison {
        kind,
        lambda: report.lambda_value,
        oracle_norm_sq: state.norm_sqr(),
        analytic_norm_sq: 2.0 * (1.0 + sign * report.lambda_value),
        oracle_theta_a: real(expectation(&state, &ta)?),
        oracle_theta_b: real(expectation(&state, &tb)?),
        chained_theta_a: report.exp_theta_a.value().unwrap_or(f64::NAN),
        chained_theta_b: report.exp_theta_b.value().unwrap_or(f64::NAN),
        naive: naive.re,
    })
}

/// Spin label combinations `(spin_a, spin_b)` of `g` given `f` at `(0, 0)`:
/// both equal, `a` differs, `b` differs, both differ.
pub const SPIN_COMBINATIONS: [(SpinLabel, SpinLabel); 4] = [
    (SpinLabel(0), SpinLabel(0)),
    (SpinLabel(1), SpinLabel(0)),
    (SpinLabel(0), SpinLabel(1)),
    (SpinLabel(1), SpinLabel(1)),
];
