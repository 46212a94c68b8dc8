//! The composite-relation and oracle-equivalence suite behind `verify-algebra`.

use std::fmt::Write as _;

use composite_core::algebra;
use composite_core::mode_dist::{CompositeKind, SpinLabel};
use composite_core::oracle::{
    expectation_comparison, relation_residuals, relation_space, two_composite_space, SPIN_COMBINATIONS,
};
use composite_core::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::sweep::kind_token;

/// Tolerance on entrywise relation residuals and structural identities.
pub const RELATION_TOL: f64 = 1e-12;

/// Tolerance on expectation values compared with the Fock space.
pub const EXPECTATION_TOL: f64 = 1e-10;

/// Largest `Lambda` for which FF expectations are compared.
pub const FF_LAMBDA_MAX: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub sizes: Vec<(usize, usize)>,
    /// Use `-theta` in the analytic right-hand side (failure-path check).
    pub corrupt_theta: bool,
    pub dim_limit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub relation: &'static str,
    pub size: (usize, usize),
    pub kind: Option<CompositeKind>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub cases: usize,
}

impl CheckLine {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub sizes: Vec<(usize, usize)>,
    pub corrupt_theta: bool,
    pub checks: Vec<CheckLine>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckLine::passed)
    }

    pub fn render(&self) -> String {
        let sizes: Vec<String> = self.sizes.iter().map(|(a, b)| format!("{a}x{b}")).collect();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "verify-algebra seed={} sizes={} corrupt_theta={}",
            self.seed,
            sizes.join(","),
            self.corrupt_theta
        );
        let _ = writeln!(
            out,
            "{:<12} {:<5} {:<4} {:>5} {:>24} {:>8}  result",
            "relation", "size", "kind", "cases", "max_residual", "tol"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<12} {:<5} {:<4} {:>5} {:>24} {:>8.0e}  {}",
                c.relation,
                format!("{}x{}", c.size.0, c.size.1),
                c.kind.map(kind_token).unwrap_or("-"),
                c.cases,
                format!("{:.16e}", c.max_residual),
                c.tolerance,
                if c.passed() { "PASS" } else { "FAIL" }
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("at least one size is required")]
    NoSizes,
    #[error("size {0}x{1} has an empty family")]
    EmptySize(usize, usize),
    #[error("size {size}: {source}")]
    Core {
        size: String,
        #[source]
        source: composite_core::Error,
    },
}

struct Accumulator {
    relation: &'static str,
    size: (usize, usize),
    kind: Option<CompositeKind>,
    tolerance: f64,
    worst: f64,
    cases: usize,
}

impl Accumulator {
    fn new(relation: &'static str, size: (usize, usize), kind: Option<CompositeKind>, tolerance: f64) -> Self {
        Self {
            relation,
            size,
            kind,
            tolerance,
            worst: 0.0,
            cases: 0,
        }
    }

    fn record(&mut self, residual: f64) {
        // NaN must fail the check
        self.worst = if residual.is_nan() {
            f64::INFINITY
        } else {
            self.worst.max(residual)
        };
        self.cases += 1;
    }

    fn finish(self) -> CheckLine {
        CheckLine {
            relation: self.relation,
            size: self.size,
            kind: self.kind,
            max_residual: self.worst,
            tolerance: self.tolerance,
            cases: self.cases,
        }
    }
}

/// Runs every relation and oracle-equivalence check for each size, with
/// random distributions drawn from a generator seeded by `config.seed`.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport, VerifyError> {
    if config.sizes.is_empty() {
        return Err(VerifyError::NoSizes);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut checks = Vec::new();
    for &(na, nb) in &config.sizes {
        if na == 0 || nb == 0 {
            return Err(VerifyError::EmptySize(na, nb));
        }
        let wrap = |source| VerifyError::Core {
            size: format!("{na}x{nb}"),
            source,
        };
        let size = (na, nb);
        let s0 = SpinLabel(0);
        for kind in CompositeKind::ALL {
            let mut annihilators = Accumulator::new("annihilators", size, Some(kind), RELATION_TOL);
            let mut creators = Accumulator::new("creators", size, Some(kind), RELATION_TOL);
            let mut mixed = Accumulator::new("mixed", size, Some(kind), RELATION_TOL);
            let mut theta = Accumulator::new("vacuum_theta", size, Some(kind), RELATION_TOL);
            for (ra, rb) in SPIN_COMBINATIONS {
                let f = sample::random_distribution(&mut rng, na, nb, s0, s0).map_err(wrap)?;
                let g = sample::random_distribution(&mut rng, na, nb, ra, rb).map_err(wrap)?;
                let space = relation_space(kind, &f, &g, config.dim_limit).map_err(wrap)?;
                let r = relation_residuals(&f, &g, kind, &space, config.corrupt_theta).map_err(wrap)?;
                annihilators.record(r.annihilators);
                creators.record(r.creators);
                mixed.record(r.mixed);
                theta.record(r.theta);
            }
            checks.extend([annihilators.finish(), creators.finish(), mixed.finish(), theta.finish()]);
        }
        let f = sample::random_distribution(&mut rng, na, nb, s0, s0).map_err(wrap)?;
        let mut purity = Accumulator::new("purity", size, None, RELATION_TOL);
        let schmidt = f.schmidt_coefficients().map_err(wrap)?;
        purity.record((schmidt.iter().map(|s| s.powi(4)).sum::<f64>() - algebra::lambda(&f)).abs());
        checks.push(purity.finish());
        for kind in [CompositeKind::BB, CompositeKind::FF] {
            let mut norm = Accumulator::new("norm", size, Some(kind), EXPECTATION_TOL);
            let mut exp = Accumulator::new("expectation", size, Some(kind), EXPECTATION_TOL);
            if kind == CompositeKind::BB || algebra::lambda(&f) < FF_LAMBDA_MAX {
                let space = two_composite_space(kind, &f, config.dim_limit).map_err(wrap)?;
                let cmp = expectation_comparison(&f, kind, &space).map_err(wrap)?;
                norm.record((cmp.oracle_norm_sq - cmp.analytic_norm_sq).abs());
                exp.record(cmp.max_residual());
            }
            checks.extend([norm.finish(), exp.finish()]);
        }
    }
    Ok(VerifyReport {
        seed: config.seed,
        sizes: config.sizes.clone(),
        corrupt_theta: config.corrupt_theta,
        checks,
    })
}

/// Parses `2x2,3x3`.
pub fn parse_sizes(text: &str) -> Result<Vec<(usize, usize)>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (a, b) = part
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("size `{part}` is not of the form NAxNB"))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("size `{part}`: `{s}` is not a non-negative integer"))
        };
        out.push((parse(a)?, parse(b)?));
    }
    if out.is_empty() {
        return Err("at least one size is required".into());
    }
    Ok(out)
}
