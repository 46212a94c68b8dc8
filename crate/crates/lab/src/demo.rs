//! Pauli-exclusion demonstration: second- and first-quantization verdicts
//! for a scenario file, with the cross-formalism residual.

use composite_core::algebra::{self, ThreeParticleNormReport};
use composite_core::pauli::{
    cross_check, helium_first_quantization_norm, helium_oracle_norm, helium_verdict, Method, Preparability,
    PreparabilityVerdict, FIRST_QUANTIZATION_FACTOR, ORACLE_TOL,
};
use serde::Serialize;

use crate::formats::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoReport {
    pub scenario: &'static str,
    pub second_quantization: PreparabilityVerdict,
    pub first_quantization: PreparabilityVerdict,
    pub combined: PreparabilityVerdict,
    /// `|first / 2 - second|` on the squared norms.
    pub formalism_residual: f64,
    /// `|analytic - second|` on the squared norms.
    pub analytic_residual: f64,
    pub analytic: ThreeParticleNormReport,
    pub tolerance: f64,
    pub agreement: bool,
}

fn verdict(norm_sq: f64, method: Method) -> PreparabilityVerdict {
    let status = if norm_sq.abs() <= composite_core::DIVERGENCE_TOL {
        Preparability::ForbiddenByExclusion
    } else {
        Preparability::Preparable
    };
    PreparabilityVerdict {
        status,
        evidence: norm_sq,
        method,
    }
}

pub fn run_demo(scenario: &Scenario) -> composite_core::Result<DemoReport> {
    match scenario {
        Scenario::ThreeBody(s) => {
            let c = cross_check(s)?;
            Ok(DemoReport {
                scenario: "three_body",
                agreement: c.agrees(ORACLE_TOL),
                second_quantization: c.second_quantization,
                first_quantization: c.first_quantization,
                combined: c.combined,
                formalism_residual: c.formalism_residual,
                analytic_residual: c.analytic_residual,
                analytic: c.analytic,
                tolerance: ORACLE_TOL,
            })
        }
        Scenario::Helium(f3) => {
            let oracle = helium_oracle_norm(f3)?;
            let first = helium_first_quantization_norm(f3);
            let analytic = algebra::symmetric_three_norm(f3)?;
            let analytic_verdict = helium_verdict(f3)?;
            let second = verdict(oracle, Method::SecondQuantization);
            let first = verdict(first, Method::FirstQuantization);
            let formalism_residual = (first.evidence / FIRST_QUANTIZATION_FACTOR - oracle).abs();
            let analytic_residual = (analytic.inverse_norm_sq - oracle).abs();
            let status = if first.status == second.status && analytic_verdict.status == second.status {
                second.status
            } else {
                Preparability::Indeterminate
            };
            let combined = PreparabilityVerdict {
                status,
                evidence: oracle,
                method: Method::Both,
            };
            Ok(DemoReport {
                scenario: "helium",
                agreement: formalism_residual <= ORACLE_TOL
                    && analytic_residual <= ORACLE_TOL
                    && status != Preparability::Indeterminate,
                second_quantization: second,
                first_quantization: first,
                combined,
                formalism_residual,
                analytic_residual,
                analytic,
                tolerance: ORACLE_TOL,
            })
        }
    }
}

pub fn to_json(report: &DemoReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("demo report serializes");
    s.push('\n');
    s
}
