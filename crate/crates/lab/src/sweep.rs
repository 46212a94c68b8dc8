//! Deviation-expectation sweep over the entanglement ratio of a Gaussian
//! mode distribution: closed form next to the assembled Gaussian integrals.

use std::fmt::Write as _;

use composite_core::algebra::{Expectation, NormStatus};
use composite_core::gaussian::{closed_form, numeric_deviation};
use composite_core::mode_dist::{CompositeKind, GaussianModeDistribution};
use serde::Serialize;

/// Relative agreement required between closed form and numeric integral.
pub const AGREEMENT_TOL: f64 = 1e-8;

/// Closed-form deviation allowed at full entanglement.
pub const BOUNDARY_TOL: f64 = 1e-6;

pub const CSV_HEADER: &str = "ratio,kind,epsilon,mu,eta,norm_sq,dev_closed,dev_numeric,abs_diff";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub alpha: f64,
    pub beta: f64,
    /// Entanglement ratios `gamma^2 / (alpha beta)`.
    pub ratios: Vec<f64>,
    pub kinds: Vec<CompositeKind>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SweepError {
    #[error("alpha and beta must be positive and finite")]
    Parameters,
    #[error("at least one ratio is required")]
    NoRatios,
    #[error("ratio {0} is outside [0, 1]")]
    Ratio(f64),
    #[error("at least one kind is required")]
    NoKinds,
    #[error("kind {0:?} has no two-composite state; use BB or FF")]
    Kind(CompositeKind),
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), SweepError> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(self.alpha) || !ok(self.beta) {
            return Err(SweepError::Parameters);
        }
        if self.ratios.is_empty() {
            return Err(SweepError::NoRatios);
        }
        if let Some(&r) = self.ratios.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(SweepError::Ratio(r));
        }
        if self.kinds.is_empty() {
            return Err(SweepError::NoKinds);
        }
        if let Some(&k) = self.kinds.iter().find(|k| **k == CompositeKind::FB) {
            return Err(SweepError::Kind(k));
        }
        Ok(())
    }
}

/// A numeric table entry or one of the sentinel tokens.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status")]
pub enum Cell {
    Value {
        value: f64,
    },
    Divergent,
    Indeterminate,
    /// The quantity is undefined at this point (numeric integral on the boundary).
    NotAvailable,
}

impl Cell {
    pub fn token(&self) -> String {
        match self {
            Cell::Value { value } => format_number(*value),
            Cell::Divergent => "DIVERGENT".into(),
            Cell::Indeterminate => "INDETERMINATE".into(),
            Cell::NotAvailable => "NA".into(),
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value { value } => Some(*value),
            _ => None,
        }
    }
}

impl From<Expectation> for Cell {
    fn from(e: Expectation) -> Self {
        match e {
            Expectation::Value { value } => Cell::Value { value },
            Expectation::Indeterminate => Cell::Indeterminate,
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub ratio: f64,
    pub kind: CompositeKind,
    pub epsilon: f64,
    pub mu: f64,
    pub eta: f64,
    pub norm_sq: Cell,
    pub dev_closed: Cell,
    pub dev_numeric: Cell,
    pub abs_diff: Cell,
    /// Closed form and integral agree, and the boundary value vanishes.
    pub check_passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub alpha: f64,
    pub beta: f64,
    pub rows: Vec<SweepRow>,
    pub all_checks_passed: bool,
}

pub fn compute_row(alpha: f64, beta: f64, ratio: f64, kind: CompositeKind) -> composite_core::Result<SweepRow> {
    let g = GaussianModeDistribution::from_ratio(alpha, beta, ratio)?;
    let closed = closed_form(&g, kind)?;
    let norm_sq = match closed.norm_status {
        NormStatus::Finite { value } => Cell::Value { value },
        NormStatus::Divergent => Cell::Divergent,
    };
    let dev_closed = Cell::from(closed.deviation);
    let dev_numeric = if g.is_strictly_valid() {
        Cell::from(numeric_deviation(&g, kind)?)
    } else {
        Cell::NotAvailable
    };
    let abs_diff = match (dev_closed, dev_numeric) {
        (Cell::Value { value: a }, Cell::Value { value: b }) => Cell::Value { value: (a - b).abs() },
        (_, Cell::NotAvailable) => Cell::NotAvailable,
        _ => Cell::Indeterminate,
    };
    let agree = match (dev_closed.value(), abs_diff.value()) {
        (Some(c), Some(d)) => d <= AGREEMENT_TOL * c.abs().max(f64::MIN_POSITIVE),
        _ => dev_closed == dev_numeric || dev_numeric == Cell::NotAvailable,
    };
    let boundary_ok = g.is_strictly_valid() || dev_closed.value().is_some_and(|v| v.abs() < BOUNDARY_TOL);
    Ok(SweepRow {
        ratio,
        kind,
        epsilon: closed.epsilon,
        mu: closed.mu,
        eta: closed.eta,
        norm_sq,
        dev_closed,
        dev_numeric,
        abs_diff,
        check_passed: agree && boundary_ok,
    })
}

/// Rows ordered by ratio (as given), then by kind (as given).
pub fn run_sweep(config: &SweepConfig) -> anyhow::Result<SweepReport> {
    config.validate()?;
    let mut rows = Vec::new();
    for &ratio in &config.ratios {
        for &kind in &config.kinds {
            rows.push(compute_row(config.alpha, config.beta, ratio, kind)?);
        }
    }
    let all_checks_passed = rows.iter().all(|r| r.check_passed);
    Ok(SweepReport {
        alpha: config.alpha,
        beta: config.beta,
        rows,
        all_checks_passed,
    })
}

pub fn kind_token(kind: CompositeKind) -> &'static str {
    match kind {
        CompositeKind::BB => "BB",
        CompositeKind::FF => "FF",
        CompositeKind::FB => "FB",
    }
}

pub fn to_csv(report: &SweepReport) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            format_number(r.ratio),
            kind_token(r.kind),
            format_number(r.epsilon),
            format_number(r.mu),
            format_number(r.eta),
            r.norm_sq.token(),
            r.dev_closed.token(),
            r.dev_numeric.token(),
            r.abs_diff.token(),
        );
    }
    out
}

pub fn to_json(report: &SweepReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("sweep report serializes");
    s.push('\n');
    s
}

pub fn render(report: &SweepReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => to_csv(report),
        OutputFormat::Json => to_json(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(ratios: &[f64]) -> SweepConfig {
        SweepConfig {
            alpha: 1.0,
            beta: 2.0,
            ratios: ratios.to_vec(),
            kinds: vec![CompositeKind::BB, CompositeKind::FF],
        }
    }

    #[test]
    fn special_rows() {
        let report = run_sweep(&config(&[0.0, 0.5, 1.0])).unwrap();
        assert!(report.all_checks_passed);
        let bb0 = &report.rows[0];
        assert!((bb0.dev_closed.value().unwrap() - 2.0).abs() < 1e-12);
        let ff0 = &report.rows[1];
        assert_eq!(ff0.norm_sq, Cell::Divergent);
        assert_eq!(ff0.dev_closed, Cell::Indeterminate);
        assert_eq!(ff0.abs_diff, Cell::Indeterminate);
        for row in &report.rows[4..] {
            assert_eq!(row.dev_closed.value().unwrap(), 0.0);
            assert_eq!(row.dev_numeric, Cell::NotAvailable);
        }
    }

    #[test]
    fn csv_layout() {
        let csv = to_csv(&run_sweep(&config(&[0.0])).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("0.0000000000000000e0,BB,1.0000000000000000e0,"));
        assert!(lines[2].contains(",DIVERGENT,INDETERMINATE,INDETERMINATE,INDETERMINATE"));
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 123456.789] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn invalid_configs() {
        assert_eq!(config(&[]).validate(), Err(SweepError::NoRatios));
        assert_eq!(config(&[1.5]).validate(), Err(SweepError::Ratio(1.5)));
        let mut c = config(&[0.5]);
        c.kinds = vec![CompositeKind::FB];
        assert_eq!(c.validate(), Err(SweepError::Kind(CompositeKind::FB)));
        c.kinds.clear();
        assert_eq!(c.validate(), Err(SweepError::NoKinds));
        c.alpha = -1.0;
        assert_eq!(c.validate(), Err(SweepError::Parameters));
    }
}
