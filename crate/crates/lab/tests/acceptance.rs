//! Acceptance suite: every criterion at its stated tolerance, one PASS/FAIL
//! line each. Exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use composite_core::algebra::{self, symmetric_three_norm};
use composite_core::fock::{FockSpace, FockSpaceConfig};
use composite_core::gaussian::{closed_form, numeric_deviation, numeric_lambda};
use composite_core::mode_dist::{
    CompositeKind, DiscreteModeDistribution, GaussianModeDistribution, MomentumGrid, SpinLabel,
};
use composite_core::oracle::{
    expectation_comparison, relation_residuals, relation_space, two_composite_space, SPIN_COMBINATIONS,
};
use composite_core::pauli::{
    cross_check, exclusion_check, helium_oracle_norm, Preparability, ThreeBodyScenario, FIRST_QUANTIZATION_FACTOR,
};
use composite_core::sample;
use composite_core::Complex64;
use composite_lab::formats::{read_scenario, Scenario};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEEDS: [u64; 5] = [11, 23, 37, 41, 59];
const DIM_LIMIT: usize = 1 << 20;
const ALPHA_BETA: [f64; 3] = [0.5, 1.0, 2.0];
const RATIOS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 0.99];

struct Outcome {
    passed: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: String) -> Self {
        Self {
            passed,
            detail,
            notes: Vec::new(),
        }
    }
}

type Check = fn() -> Result<Outcome, composite_core::Error>;

fn s0() -> SpinLabel {
    SpinLabel(0)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn within_time(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn criterion_1() -> Result<Outcome, composite_core::Error> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for seed in SEEDS {
        let mut rng = rng(seed);
        for kind in CompositeKind::ALL {
            for (ra, rb) in SPIN_COMBINATIONS {
                let f = sample::random_distribution(&mut rng, 3, 3, s0(), s0())?;
                let g = sample::random_distribution(&mut rng, 3, 3, ra, rb)?;
                let space = relation_space(kind, &f, &g, DIM_LIMIT)?;
                let r = relation_residuals(&f, &g, kind, &space, false)?;
                worst = worst.max(if r.max().is_nan() { f64::INFINITY } else { r.max() });
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    Ok(Outcome::new(
        worst < 1e-12 && within_time(elapsed, 60.0),
        format!(
            "{cases} cases, max residual {worst:.3e} (< 1e-12), {:.2} s (< 60 s)",
            elapsed.as_secs_f64()
        ),
    ))
}

fn gaussian_grid() -> impl Iterator<Item = (f64, f64, f64)> {
    ALPHA_BETA.into_iter().flat_map(|a| {
        ALPHA_BETA
            .into_iter()
            .flat_map(move |b| RATIOS.into_iter().map(move |r| (a, b, r)))
    })
}

fn criterion_2() -> Result<Outcome, composite_core::Error> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (a, b, r) in gaussian_grid() {
        let g = GaussianModeDistribution::from_ratio(a, b, r)?;
        let eps = (1.0 - r).sqrt();
        worst = worst.max((numeric_lambda(&g)? - eps).abs());
    }
    let elapsed = start.elapsed();
    Ok(Outcome::new(
        worst < 1e-10 && within_time(elapsed, 1.0),
        format!(
            "45 grid points, max |Lambda - eps| {worst:.3e} (< 1e-10), {:.3} s (< 1 s)",
            elapsed.as_secs_f64()
        ),
    ))
}

fn criterion_3() -> Result<Outcome, composite_core::Error> {
    let start = Instant::now();
    let mut worst_rel = 0.0f64;
    let mut compared = 0;
    for (a, b, r) in gaussian_grid() {
        let g = GaussianModeDistribution::from_ratio(a, b, r)?;
        for kind in [CompositeKind::BB, CompositeKind::FF] {
            if kind == CompositeKind::FF && r == 0.0 {
                continue;
            }
            let closed = closed_form(&g, kind)?.deviation.value().unwrap_or(f64::NAN);
            let numeric = numeric_deviation(&g, kind)?.value().unwrap_or(f64::NAN);
            let rel = (closed - numeric).abs() / closed.abs();
            worst_rel = worst_rel.max(if rel.is_nan() { f64::INFINITY } else { rel });
            compared += 1;
        }
    }
    let mut worst_limit = 0.0f64;
    for a in ALPHA_BETA {
        for b in ALPHA_BETA {
            let g = GaussianModeDistribution::from_ratio(a, b, 1.0)?;
            for kind in [CompositeKind::BB, CompositeKind::FF] {
                let v = closed_form(&g, kind)?.deviation.value().unwrap_or(f64::NAN);
                worst_limit = worst_limit.max(if v.is_nan() { f64::INFINITY } else { v.abs() });
            }
        }
    }
    let elapsed = start.elapsed();
    Ok(Outcome::new(
        worst_rel < 1e-8 && worst_limit < 1e-6 && within_time(elapsed, 5.0),
        format!(
            "{compared} comparisons, max relative diff {worst_rel:.3e} (< 1e-8); ratio-1 limit max {worst_limit:.3e} (< 1e-6); {:.3} s (< 5 s)",
            elapsed.as_secs_f64()
        ),
    ))
}

fn criterion_4() -> Result<Outcome, composite_core::Error> {
    let g = GaussianModeDistribution::new(1.0, 1.0, 0.5)?;
    let disc = g.discretize(&MomentumGrid::square(64))?;
    let lambda = algebra::lambda(&disc.distribution);
    let diff = (lambda - 0.75f64.sqrt()).abs();
    Ok(Outcome::new(
        diff < 1e-6,
        format!("64x64 grid, Lambda {lambda:.12}, |Lambda - sqrt(0.75)| {diff:.3e} (< 1e-6)"),
    ))
}

fn criterion_5() -> Result<Outcome, composite_core::Error> {
    let spaces: Vec<(CompositeKind, FockSpace)> = CompositeKind::ALL
        .into_iter()
        .map(|k| {
            Ok((
                k,
                FockSpace::build(FockSpaceConfig::for_kind(k, 4, 4).with_dim_limit(DIM_LIMIT))?,
            ))
        })
        .collect::<Result<_, composite_core::Error>>()?;
    let mut rng = rng(5);
    let mut fb_zero = 0;
    let mut ff_zero = 0;
    let mut ff_worst_vs_true = 0.0f64;
    let mut ff_min_norm = f64::INFINITY;
    let mut bb_worst = 0.0f64;
    const SAMPLES: usize = 20;
    for _ in 0..SAMPLES {
        let f = sample::random_distribution(&mut rng, 4, 4, s0(), s0())?;
        let lambda = algebra::lambda(&f);
        for (kind, space) in &spaces {
            let r = exclusion_check(&f, *kind, space)?;
            match kind {
                CompositeKind::FB => fb_zero += r.exact_zero as usize,
                CompositeKind::FF => {
                    ff_zero += r.exact_zero as usize;
                    ff_min_norm = ff_min_norm.min(r.norm_sq);
                    ff_worst_vs_true = ff_worst_vs_true.max((r.norm_sq - 2.0 * (1.0 - lambda)).abs());
                }
                CompositeKind::BB => bb_worst = bb_worst.max((r.norm_sq - 2.0 * (1.0 + lambda)).abs()),
            }
        }
    }
    let passed = fb_zero == SAMPLES && ff_zero == SAMPLES && bb_worst < 1e-10;
    let mut outcome = Outcome::new(
        passed,
        format!(
            "FB exact zero {fb_zero}/{SAMPLES}; FF exact zero {ff_zero}/{SAMPLES}; BB max |norm^2 - 2(1+Lambda)| {bb_worst:.3e} (< 1e-10)"
        ),
    );
    if ff_zero != SAMPLES {
        outcome.notes = vec![
            format!("FF clause does not hold: smallest FF norm^2 {ff_min_norm:.6}"),
            format!("FF norm^2 equals 2(1 - Lambda) within {ff_worst_vs_true:.3e} on every sample"),
            "(c_f^+)^2 for FF is sum f_nm f_NM a_n^+ b_m^+ a_N^+ b_M^+, symmetric under the joint swap (n,m)<->(N,M)"
                .into(),
            "so the terms add instead of cancelling; it vanishes only when Lambda = 1 (separable f)".into(),
            "exact cancellation needs an odd number of fermionic constituents, which is the FB case".into(),
        ];
    }
    Ok(outcome)
}

fn separable_matching(rng: &mut ChaCha8Rng, na: usize, nb: usize) -> Result<ThreeBodyScenario, composite_core::Error> {
    let u = sample::random_unit_vector(rng, na);
    let v = sample::random_unit_vector(rng, nb);
    let phase = Complex64::from_polar(1.0, 0.7);
    let g: Vec<Complex64> = u.iter().map(|z| z * phase).collect();
    ThreeBodyScenario::new(DiscreteModeDistribution::separable(&u, &v)?, g, s0())
}

fn entangled(rng: &mut ChaCha8Rng, na: usize, nb: usize) -> Result<ThreeBodyScenario, composite_core::Error> {
    let f = sample::random_distribution(rng, na, nb, s0(), s0())?;
    let g = sample::random_unit_vector(rng, na);
    ThreeBodyScenario::new(f, g, s0())
}

fn bundled(name: &str) -> Scenario {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name);
    read_scenario(&path).unwrap_or_else(|e| panic!("{name}: {e:#}"))
}

fn criterion_6() -> Result<Outcome, composite_core::Error> {
    let mut rng = rng(6);
    let mut cases: Vec<(ThreeBodyScenario, bool)> = Vec::new();
    for (na, nb) in [(2, 2), (3, 2), (3, 3)] {
        for _ in 0..3 {
            cases.push((separable_matching(&mut rng, na, nb)?, true));
            cases.push((entangled(&mut rng, na, nb)?, false));
        }
    }
    for (name, forbidden) in [("separable.json", true), ("entangled.json", false)] {
        match bundled(name) {
            Scenario::ThreeBody(s) => cases.push((s, forbidden)),
            Scenario::Helium(_) => panic!("{name} is not a three-body scenario"),
        }
    }
    let mut verdicts_ok = 0;
    let mut worst_formalism = 0.0f64;
    let mut worst_convention = 0.0f64;
    let mut min_entangled = f64::INFINITY;
    for (s, forbidden) in &cases {
        let c = cross_check(s)?;
        let expected = if *forbidden {
            Preparability::ForbiddenByExclusion
        } else {
            Preparability::Preparable
        };
        let zero_ok = !*forbidden || c.second_quantization.evidence.abs() <= 1e-12;
        let positive_ok = *forbidden || (c.second_quantization.evidence > 0.0 && c.first_quantization.evidence > 0.0);
        if !*forbidden {
            min_entangled = min_entangled.min(c.second_quantization.evidence);
        }
        if c.second_quantization.status == expected && c.first_quantization.status == expected && zero_ok && positive_ok
        {
            verdicts_ok += 1;
        }
        worst_formalism = worst_formalism.max(c.formalism_residual);
        // the raw expression is minus the oracle norm^2
        worst_convention = worst_convention
            .max(c.analytic_residual)
            .max((-c.analytic.raw_expression - c.second_quantization.evidence).abs());
    }
    let n = cases.len();
    Ok(Outcome::new(
        verdicts_ok == n && worst_formalism <= 1e-12 && worst_convention <= 1e-12,
        format!(
            "{verdicts_ok}/{n} verdicts correct in both formalisms (min entangled norm^2 {min_entangled:.3e}); \
             |first/{FIRST_QUANTIZATION_FACTOR} - second| max {worst_formalism:.3e}; analytic vs oracle max {worst_convention:.3e} (<= 1e-12)"
        ),
    ))
}

fn criterion_7() -> Result<Outcome, composite_core::Error> {
    let mut rng = rng(7);
    let cases = [
        (Some(1.0), SpinLabel(0), SpinLabel(0), 0.0, "symmetric equal spins"),
        (None, SpinLabel(0), SpinLabel(1), 1.0, "unequal spins"),
        (Some(1.0), SpinLabel(0), SpinLabel(1), 1.0, "symmetric unequal spins"),
        (Some(-1.0), SpinLabel(0), SpinLabel(0), 2.0, "antisymmetric equal spins"),
    ];
    let mut worst = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for (sign, r, s, expected, _) in cases {
        for (nf, np) in [(2, 1), (3, 2), (3, 3)] {
            let f3 = sample::random_three_particle(&mut rng, nf, np, sign, r, s)?;
            let value = symmetric_three_norm(&f3)?.inverse_norm_sq;
            worst = worst.max((value - expected).abs());
            worst_oracle = worst_oracle.max((helium_oracle_norm(&f3)? - value).abs());
        }
    }
    if let Scenario::Helium(f3) = bundled("helium_symmetric.json") {
        worst = worst.max(symmetric_three_norm(&f3)?.inverse_norm_sq.abs());
    } else {
        panic!("helium_symmetric.json is not a helium scenario");
    }
    Ok(Outcome::new(
        worst <= 1e-12 && worst_oracle <= 1e-12,
        format!(
            "max |inverse norm - expected (0, 1, 2)| {worst:.3e}; analytic vs oracle {worst_oracle:.3e} (<= 1e-12)"
        ),
    ))
}

fn criterion_8() -> Result<Outcome, composite_core::Error> {
    let mut worst = 0.0f64;
    let mut compared = 0;
    for seed in SEEDS {
        let f = sample::random_distribution(&mut rng(seed), 3, 3, s0(), s0())?;
        for kind in [CompositeKind::BB, CompositeKind::FF] {
            if kind == CompositeKind::FF && algebra::lambda(&f) >= 1.0 - 1e-6 {
                continue;
            }
            let space = two_composite_space(kind, &f, DIM_LIMIT)?;
            let r = expectation_comparison(&f, kind, &space)?.max_residual();
            worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });
            compared += 1;
        }
    }
    Ok(Outcome::new(
        worst < 1e-10,
        format!("{compared} states, chained and naive vs oracle max residual {worst:.3e} (< 1e-10)"),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 8] = [
        ("commutation relations vs Fock oracle", criterion_1),
        ("Lambda equals epsilon", criterion_2),
        ("closed-form deviation", criterion_3),
        ("discrete/continuous consistency", criterion_4),
        ("exclusion exactness", criterion_5),
        ("three-particle norm in both formalisms", criterion_6),
        ("helium symmetric norm", criterion_7),
        ("six-index contraction vs oracle", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("criterion {}: {tag}: {name}: {}", i + 1, outcome.detail);
        for note in &outcome.notes {
            println!("    {note}");
        }
        failed += usize::from(!outcome.passed);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
