mod common;

use std::f64::consts::FRAC_1_SQRT_2;

use common::{random_f, rng, schmidt_oracle, SEEDS};
use composite_core::algebra::{self, Contraction, Expectation, NormStatus};
use composite_core::fock::{expectation, FockSpace, FockSpaceConfig};
use composite_core::mode_dist::{CompositeKind, DiscreteModeDistribution};
use composite_core::oracle::{expectation_comparison, two_composite_space};
use composite_core::pauli::exclusion_check;

#[test]
fn six_index_contraction_matches_oracle() {
    for seed in SEEDS {
        let mut r = rng(seed);
        let f = random_f(&mut r, 3, 3);
        for kind in [CompositeKind::BB, CompositeKind::FF] {
            assert!(algebra::lambda(&f) < 1.0 - 1e-6);
            let space = two_composite_space(kind, &f, 1 << 20).unwrap();
            let cmp = expectation_comparison(&f, kind, &space).unwrap();
            assert!(cmp.max_residual() < 1e-10, "seed {seed} {kind:?}: {cmp:?}");
        }
    }
}

#[test]
fn rectangular_distributions_match_oracle() {
    let mut r = rng(17);
    for (na, nb) in [(2, 3), (3, 2), (1, 3)] {
        let f = random_f(&mut r, na, nb);
        let space = two_composite_space(CompositeKind::BB, &f, 1 << 20).unwrap();
        let cmp = expectation_comparison(&f, CompositeKind::BB, &space).unwrap();
        assert!(cmp.max_residual() < 1e-10, "{na}x{nb}: {cmp:?}");
    }
}

#[test]
fn diagonal_norms_match_oracle() {
    let f = DiscreteModeDistribution::from_real_rows(&[&[FRAC_1_SQRT_2, 0.0], &[0.0, FRAC_1_SQRT_2]]).unwrap();
    let bb = FockSpace::build(FockSpaceConfig::for_kind(CompositeKind::BB, 2, 2)).unwrap();
    assert!((bb.two_composite_state(&f).unwrap().norm_sqr() - 3.0).abs() < 1e-14);
    let ff = FockSpace::build(FockSpaceConfig::for_kind(CompositeKind::FF, 2, 2)).unwrap();
    let n2 = algebra::two_composite_norm(&f, CompositeKind::FF).unwrap();
    assert!((n2.value().unwrap() - 1.0).abs() < 1e-14);
    assert!((ff.two_composite_state(&f).unwrap().norm_sqr() - 1.0).abs() < 1e-14);
}

#[test]
fn theta_oracle_on_random_pairs() {
    let mut r = rng(3);
    let f = random_f(&mut r, 3, 2);
    let g = random_f(&mut r, 3, 2);
    let space = FockSpace::build(FockSpaceConfig::for_kind(CompositeKind::FF, 3, 2)).unwrap();
    let cf = space.composite_creation(&f).unwrap().apply(&space.vacuum()).unwrap();
    let cg = space.composite_creation(&g).unwrap().apply(&space.vacuum()).unwrap();
    let oracle = cf.inner(&cg).unwrap();
    assert!((oracle - f.inner_product(&g).unwrap()).norm() < 1e-14);
}

#[test]
fn theta_b_expectation_uses_transpose() {
    let mut r = rng(21);
    let f = random_f(&mut r, 2, 3);
    let space = two_composite_space(CompositeKind::BB, &f, 1 << 20).unwrap();
    let state = space.two_composite_state(&f).unwrap();
    let tb = algebra::theta_op_b(&f, &f, &space).unwrap();
    let oracle = expectation(&state, &tb).unwrap().re;
    let report = algebra::deviation_expectations(&f, CompositeKind::BB).unwrap();
    assert!((report.exp_theta_b.value().unwrap() - oracle).abs() < 1e-12);
}

#[test]
fn separable_deviation_values() {
    let f = DiscreteModeDistribution::from_real_rows(&[&[0.48, 0.64], &[0.36, 0.48]]).unwrap();
    let bb = algebra::deviation_expectations(&f, CompositeKind::BB).unwrap();
    assert!((bb.exp_theta_a.value().unwrap() - 2.0).abs() < 1e-13);
    let space = two_composite_space(CompositeKind::BB, &f, 1 << 20).unwrap();
    let cmp = expectation_comparison(&f, CompositeKind::BB, &space).unwrap();
    assert!((cmp.oracle_theta_a - 2.0).abs() < 1e-12);
    let ff = algebra::deviation_expectations(&f, CompositeKind::FF).unwrap();
    assert_eq!(ff.norm_status, NormStatus::Divergent);
    assert_eq!(ff.exp_theta_a, Expectation::Indeterminate);
    assert_eq!(ff.exp_theta_b, Expectation::Indeterminate);
}

#[test]
fn bb_and_ff_differ() {
    let mut r = rng(5);
    for _ in 0..5 {
        let f = random_f(&mut r, 3, 3);
        let bb = algebra::deviation_expectations(&f, CompositeKind::BB).unwrap();
        let ff = algebra::deviation_expectations(&f, CompositeKind::FF).unwrap();
        assert_ne!(bb.norm_status, ff.norm_status);
        let (a, b) = (bb.exp_theta_a.value().unwrap(), ff.exp_theta_a.value().unwrap());
        assert!((a - b).abs() > 1e-6);
    }
}

#[test]
fn schmidt_matches_eigen_oracle() {
    let mut r = rng(11);
    for (na, nb) in [(4, 4), (3, 5), (5, 2)] {
        let f = random_f(&mut r, na, nb);
        let ours = f.schmidt_coefficients().unwrap();
        let oracle = schmidt_oracle(&f);
        assert_eq!(ours.len(), oracle.len());
        for (x, y) in ours.iter().zip(&oracle) {
            assert!((x - y).abs() < 1e-12, "{ours:?} vs {oracle:?}");
        }
        let total: f64 = ours.iter().map(|s| s * s).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let purity: f64 = ours.iter().map(|s| s.powi(4)).sum();
        assert!((purity - algebra::lambda(&f)).abs() < 1e-12);
    }
}

#[test]
fn contraction_methods_agree_on_rectangular() {
    let mut r = rng(8);
    let f = random_f(&mut r, 2, 4);
    for kind in [CompositeKind::BB, CompositeKind::FF] {
        let a = algebra::deviation_contraction(&f, kind, Contraction::Chained).unwrap();
        let b = algebra::deviation_contraction(&f, kind, Contraction::Naive).unwrap();
        assert!((a - b).norm() < 1e-13);
    }
}

#[test]
fn bb_exclusion_norm_matches_lambda() {
    let mut r = rng(12);
    for _ in 0..3 {
        let f = random_f(&mut r, 3, 3);
        let space = FockSpace::build(FockSpaceConfig::for_kind(CompositeKind::BB, 3, 3)).unwrap();
        let rep = exclusion_check(&f, CompositeKind::BB, &space).unwrap();
        assert!((rep.norm_sq - 2.0 * (1.0 + algebra::lambda(&f))).abs() < 1e-10);
    }
}

#[test]
fn two_composite_state_matches_operator_square() {
    let mut r = rng(14);
    for kind in [CompositeKind::BB, CompositeKind::FF, CompositeKind::FB] {
        let f = random_f(&mut r, 2, 3);
        let space = FockSpace::build(FockSpaceConfig::for_kind(kind, 2, 3)).unwrap();
        let c = space.composite_creation(&f).unwrap();
        let via_ops = c.apply(&c.apply(&space.vacuum()).unwrap()).unwrap();
        let direct = space.two_composite_state(&f).unwrap();
        for (x, y) in via_ops.amplitudes().iter().zip(direct.amplitudes()) {
            assert!((x - y).norm() < 1e-14, "{kind:?}");
        }
    }
}
