//! Closed forms for the Gaussian mode distribution and an independent
//! multivariate Gaussian-integral evaluator used to check them.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{norm_from_overlap, Expectation, NormStatus};
use crate::mode_dist::{CompositeKind, GaussianModeDistribution};
use crate::{Error, Result, DIVERGENCE_TOL};

/// `mu = 2 alpha beta - gamma^2 - gamma^4 / (4 (2 alpha beta - gamma^2))`.
pub fn mu(g: &GaussianModeDistribution) -> f64 {
    let g2 = g.gamma * g.gamma;
    let d = 2.0 * g.alpha * g.beta - g2;
    d - g2 * g2 / (4.0 * d)
}

/// `eta = mu - (gamma^2 + gamma^4 / (2 (2 alpha beta - gamma^2)))^2 / (4 mu)`.
///
/// Evaluated in the factored form
/// `(2D + gamma^2) (D - gamma^2) / (2D - gamma^2)` with `D = 2 alpha beta - gamma^2`,
/// which avoids the cancellation of the literal expression near `gamma^2 = alpha beta`.
pub fn eta(g: &GaussianModeDistribution) -> f64 {
    let g2 = g.gamma * g.gamma;
    let d = 2.0 * g.alpha * g.beta - g2;
    (2.0 * d + g2) * (2.0 * g.determinant()) / (2.0 * d - g2)
}

/// `eta / epsilon^2`, finite at `epsilon = 0`.
fn eta_over_eps_sq(g: &GaussianModeDistribution) -> f64 {
    let g2 = g.gamma * g.gamma;
    let d = 2.0 * g.alpha * g.beta - g2;
    (2.0 * d + g2) * (2.0 * g.alpha * g.beta) / (2.0 * d - g2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GaussianClosedForm {
    pub kind: CompositeKind,
    pub epsilon: f64,
    pub mu: f64,
    pub eta: f64,
    pub norm_status: NormStatus,
    /// `<2_f|theta_a|2_f> = <2_f|theta_b|2_f>`.
    pub deviation: Expectation,
}

/// Normalization and deviation expectation value in closed form:
///
/// ```text
/// 2 N^2 = 1 / (1 +- eps)
/// <theta_a> = 2 eps / (1 +- eps)
///           +- 8 eps^3 (alpha beta)^{3/2} / (sqrt(2 mu eta) (2 alpha beta - gamma^2)^{1/2} (1 +- eps))
/// ```
///
/// The second term is evaluated as `eps^2 / sqrt(eta / eps^2)`, so the
/// boundary `gamma^2 = alpha beta` gives its limit 0.
pub fn closed_form(g: &GaussianModeDistribution, kind: CompositeKind) -> Result<GaussianClosedForm> {
    g.validate()?;
    let sign = kind.pair_sign()?;
    let epsilon = g.epsilon();
    let norm_status = norm_from_overlap(epsilon, sign);
    let deviation = match norm_status {
        NormStatus::Divergent => Expectation::Indeterminate,
        NormStatus::Finite { .. } => {
            let ab = g.alpha * g.beta;
            let d = 2.0 * ab - g.gamma * g.gamma;
            let denom = 1.0 + sign * epsilon;
            let first = 2.0 * epsilon / denom;
            let second =
                8.0 * epsilon * epsilon * ab.powf(1.5) / ((2.0 * mu(g) * eta_over_eps_sq(g)).sqrt() * d.sqrt() * denom);
            Expectation::Value {
                value: first + sign * second,
            }
        }
    };
    Ok(GaussianClosedForm {
        kind,
        epsilon,
        mu: mu(g),
        eta: eta(g),
        norm_status,
        deviation,
    })
}

/// Left-hand sides of the integrability conditions for the normalization
/// integrals; each must be non-negative.
pub fn norm_validity_conditions(g: &GaussianModeDistribution) -> [f64; 2] {
    let g2 = g.gamma * g.gamma;
    let first = 2.0 * g.alpha - g2 / g.beta;
    let second = first - g2 * g2 / (g.beta * (2.0 * g.alpha * g.beta - g2));
    [first, second]
}

/// Left-hand sides of the integrability conditions for the deviation
/// integrals; each must be non-negative.
pub fn deviation_validity_conditions(g: &GaussianModeDistribution) -> [f64; 3] {
    let g2 = g.gamma * g.gamma;
    let m = mu(g);
    let inner = g2 + g2 * g2 / (2.0 * (2.0 * g.alpha * g.beta - g2));
    [
        2.0 * g.alpha - g2 / g.beta,
        m / g.beta,
        m / g.beta - inner * inner / (4.0 * g.beta * m),
    ]
}

/// Integrand `prefactor exp(-x^T A x + b^T x)` over `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    pub dim: usize,
    /// Row-major symmetric `d x d` matrix `A`.
    pub matrix: Vec<f64>,
    pub linear: Vec<f64>,
    pub prefactor: f64,
}

impl QuadraticForm {
    pub fn new(dim: usize, matrix: Vec<f64>, linear: Vec<f64>, prefactor: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyShape);
        }
        if matrix.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                found: matrix.len(),
            });
        }
        if linear.len() != dim {
            return Err(Error::EntryCount {
                expected: dim,
                found: linear.len(),
            });
        }
        if !matrix.iter().chain(&linear).all(|x| x.is_finite()) || !prefactor.is_finite() {
            return Err(Error::NonFinite);
        }
        for i in 0..dim {
            for j in 0..i {
                let (a, b) = (matrix[i * dim + j], matrix[j * dim + i]);
                if (a - b).abs() > 1e-14 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidConfig("quadratic form matrix is not symmetric"));
                }
            }
        }
        Ok(Self {
            dim,
            matrix,
            linear,
            prefactor,
        })
    }

    /// Integrand of a product of Gaussian mode-distribution factors. Each
    /// `(x, y)` pair names the integration variables `(p, q)` of one factor
    /// `f(p, q)`; since `f` is real, `f` and `f*` contribute alike.
    pub fn from_factors(g: &GaussianModeDistribution, dim: usize, factors: &[(usize, usize)]) -> Result<Self> {
        let mut matrix = vec![0.0; dim * dim];
        for &(x, y) in factors {
            if x >= dim || y >= dim {
                return Err(Error::IndexOutOfRange {
                    index: x.max(y),
                    len: dim,
                });
            }
            matrix[x * dim + x] += g.alpha;
            matrix[y * dim + y] += g.beta;
            matrix[x * dim + y] += g.gamma;
            matrix[y * dim + x] += g.gamma;
        }
        let prefactor = g.prefactor().powi(factors.len() as i32);
        Self::new(dim, matrix, vec![0.0; dim], prefactor)
    }
}

/// Lower-triangular Cholesky factor of a row-major symmetric matrix.
fn cholesky(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = a[i * n + j] - (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum::<f64>();
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return Err(Error::NotPositiveDefinite);
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// `prefactor pi^{d/2} / sqrt(det A) exp(b^T A^{-1} b / 4)`.
pub fn gaussian_integral(q: &QuadraticForm) -> Result<f64> {
    let n = q.dim;
    let l = cholesky(&q.matrix, n)?;
    let log_sqrt_det: f64 = (0..n).map(|i| l[i * n + i].ln()).sum();
    // b^T A^{-1} b = |L^{-1} b|^2
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = q.linear[i] - (0..i).map(|k| l[i * n + k] * y[k]).sum::<f64>();
        y[i] = s / l[i * n + i];
    }
    let quad: f64 = y.iter().map(|v| v * v).sum();
    let log_value = 0.5 * n as f64 * PI.ln() - log_sqrt_det + quad / 4.0;
    Ok(q.prefactor * log_value.exp())
}

fn require_strict(g: &GaussianModeDistribution) -> Result<()> {
    g.validate()?;
    if !g.is_strictly_valid() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(())
}

// Integration variables of the four-fold overlap: p, P, q, Q.
const LAMBDA_FACTORS: [(usize, usize); 4] = [(1, 3), (1, 2), (0, 2), (0, 3)];

// Integration variables of the six-fold contraction: p, P, p*, q, Q, q*.
const KERNEL_F: [(usize, usize); 3] = [(0, 3), (1, 4), (2, 5)];
const KERNEL_G: [[(usize, usize); 3]; 4] = [
    [(2, 4), (1, 5), (0, 3)],
    [(2, 3), (0, 5), (1, 4)],
    [(2, 3), (0, 4), (1, 5)],
    [(2, 4), (1, 3), (0, 5)],
];

/// Quadratic form of the four-fold overlap integrand.
pub fn lambda_form(g: &GaussianModeDistribution) -> Result<QuadraticForm> {
    QuadraticForm::from_factors(g, 4, &LAMBDA_FACTORS)
}

/// Quadratic forms of the four `F G` terms of the deviation integrand,
/// without their factor 2 and sign.
pub fn deviation_forms(g: &GaussianModeDistribution) -> Result<Vec<QuadraticForm>> {
    KERNEL_G
        .iter()
        .map(|term| {
            let mut factors = Vec::from(KERNEL_F);
            factors.extend_from_slice(term);
            QuadraticForm::from_factors(g, 6, &factors)
        })
        .collect()
}

/// Four-fold overlap of the Gaussian, evaluated as a 4-dimensional Gaussian integral.
pub fn numeric_lambda(g: &GaussianModeDistribution) -> Result<f64> {
    require_strict(g)?;
    gaussian_integral(&lambda_form(g)?)
}

/// Deviation expectation value from the four 6-dimensional Gaussian
/// integrals of the `F G` kernel, scaled by `N^2 = 1 / (2 (1 +- eps))`.
pub fn numeric_deviation(g: &GaussianModeDistribution, kind: CompositeKind) -> Result<Expectation> {
    require_strict(g)?;
    let sign = kind.pair_sign()?;
    let epsilon = g.epsilon();
    if sign < 0.0 && (1.0 - epsilon).abs() <= DIVERGENCE_TOL {
        return Ok(Expectation::Indeterminate);
    }
    let n2 = match norm_from_overlap(epsilon, sign) {
        NormStatus::Finite { value } => value,
        NormStatus::Divergent => return Ok(Expectation::Indeterminate),
    };
    let terms = deviation_forms(g)?
        .iter()
        .map(gaussian_integral)
        .collect::<Result<Vec<_>>>()?;
    let total = 2.0 * (terms[0] + terms[1] + sign * (terms[2] + terms[3]));
    Ok(Expectation::Value { value: n2 * total })
}
