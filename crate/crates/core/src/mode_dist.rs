//! Two-particle mode distributions.
//!
//! A [`DiscreteModeDistribution`] holds the coefficients `f[n][m]` of a
//! composite mode over `na` modes of particle `a` and `nb` modes of particle
//! `b`. A [`GaussianModeDistribution`] holds the parameters of the continuous
//! family `f(p, q) ~ exp(-alpha p^2 - beta q^2 - 2 gamma p q)` and can be
//! sampled onto a finite momentum grid.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{numeric, svd, Error, Result, STRUCTURAL_TOL};

/// Opaque spin label. Two labels only ever enter through the Kronecker delta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct SpinLabel(pub u32);

impl SpinLabel {
    /// `delta_{rs}`.
    pub fn delta(self, other: SpinLabel) -> f64 {
        if self == other {
            1.0
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Statistics {
    Boson,
    Fermion,
}

/// Constituent statistics of a composite. In `FB` the `a` particle is the
/// fermion and `b` the boson.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CompositeKind {
    BB,
    FF,
    FB,
}

impl CompositeKind {
    pub const ALL: [CompositeKind; 3] = [CompositeKind::BB, CompositeKind::FF, CompositeKind::FB];

    pub fn stat_a(self) -> Statistics {
        match self {
            CompositeKind::BB => Statistics::Boson,
            CompositeKind::FF | CompositeKind::FB => Statistics::Fermion,
        }
    }

    pub fn stat_b(self) -> Statistics {
        match self {
            CompositeKind::BB | CompositeKind::FB => Statistics::Boson,
            CompositeKind::FF => Statistics::Fermion,
        }
    }

    /// The upper/lower sign of the two-composite formulas: `+1` for BB,
    /// `-1` for FF. FB has no two-identical-composite state.
    pub fn pair_sign(self) -> Result<f64> {
        match self {
            CompositeKind::BB => Ok(1.0),
            CompositeKind::FF => Ok(-1.0),
            CompositeKind::FB => Err(Error::UnsupportedKind(self)),
        }
    }
}

/// Coefficients `f[n][m]` of a composite mode, unit-normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteModeDistribution {
    na: usize,
    nb: usize,
    entries: Vec<Complex64>,
    spin_a: SpinLabel,
    spin_b: SpinLabel,
}

fn check_shape(na: usize, nb: usize, entries: &[Complex64]) -> Result<()> {
    if na == 0 || nb == 0 {
        return Err(Error::EmptyShape);
    }
    if entries.len() != na * nb {
        return Err(Error::EntryCount {
            expected: na * nb,
            found: entries.len(),
        });
    }
    if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

impl DiscreteModeDistribution {
    /// Wraps row-major entries that are already normalized to within
    /// [`STRUCTURAL_TOL`].
    pub fn new(na: usize, nb: usize, entries: Vec<Complex64>, spin_a: SpinLabel, spin_b: SpinLabel) -> Result<Self> {
        check_shape(na, nb, &entries)?;
        let norm: f64 = entries.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            na,
            nb,
            entries,
            spin_a,
            spin_b,
        })
    }

    /// Scales arbitrary row-major entries to unit norm. Each entry keeps its
    /// phase.
    pub fn normalize(
        na: usize,
        nb: usize,
        mut entries: Vec<Complex64>,
        spin_a: SpinLabel,
        spin_b: SpinLabel,
    ) -> Result<Self> {
        check_shape(na, nb, &entries)?;
        let norm: f64 = entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::AllZero);
        }
        for z in entries.iter_mut() {
            *z /= norm;
        }
        Ok(Self {
            na,
            nb,
            entries,
            spin_a,
            spin_b,
        })
    }

    /// Normalizes a real matrix given row by row; both spins are label 0.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let na = rows.len();
        let nb = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != nb) {
            return Err(Error::EntryCount {
                expected: na * nb,
                found: rows.iter().map(|r| r.len()).sum(),
            });
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::normalize(na, nb, entries, SpinLabel(0), SpinLabel(0))
    }

    /// Product distribution `f[n][m] = u[n] v[m]`, normalized.
    pub fn separable(u: &[Complex64], v: &[Complex64]) -> Result<Self> {
        let entries = u.iter().flat_map(|&x| v.iter().map(move |&y| x * y)).collect();
        Self::normalize(u.len(), v.len(), entries, SpinLabel(0), SpinLabel(0))
    }

    pub fn with_spins(mut self, spin_a: SpinLabel, spin_b: SpinLabel) -> Self {
        self.spin_a = spin_a;
        self.spin_b = spin_b;
        self
    }

    /// Re-applies normalization; a no-op up to roundoff for valid inputs.
    pub fn renormalized(&self) -> Result<Self> {
        Self::normalize(self.na, self.nb, self.entries.clone(), self.spin_a, self.spin_b)
    }

    pub fn na(&self) -> usize {
        self.na
    }

    pub fn nb(&self) -> usize {
        self.nb
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.na, self.nb)
    }

    pub fn spin_a(&self) -> SpinLabel {
        self.spin_a
    }

    pub fn spin_b(&self) -> SpinLabel {
        self.spin_b
    }

    /// Row-major entries, `f[n][m]` at `n * nb + m`.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.entries[n * self.nb + m]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Swaps the roles of the two particles: `f^T` with exchanged spins.
    pub fn transposed(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for m in 0..self.nb {
            for n in 0..self.na {
                entries.push(self.get(n, m));
            }
        }
        Self {
            na: self.nb,
            nb: self.na,
            entries,
            spin_a: self.spin_b,
            spin_b: self.spin_a,
        }
    }

    /// `e^{i phi} f`.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        let phase = Complex64::from_polar(1.0, phi);
        let mut out = self.clone();
        for z in out.entries.iter_mut() {
            *z *= phase;
        }
        out
    }

    /// Reduced one-particle matrix of particle `a`, `rho = f f^dagger`,
    /// row-major `na x na`.
    pub fn reduced_density_a(&self) -> Vec<Complex64> {
        let adj = numeric::adjoint(&self.entries, self.na, self.nb);
        numeric::matmul(&self.entries, &adj, self.na, self.nb, self.na)
    }

    /// `theta = <f|g> delta_{rR} delta_{sS}`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        let overlap: Complex64 = self.entries.iter().zip(&other.entries).map(|(f, g)| f.conj() * g).sum();
        Ok(overlap * self.spin_a.delta(other.spin_a) * self.spin_b.delta(other.spin_b))
    }

    /// Singular values of `f` in descending order.
    pub fn schmidt_coefficients(&self) -> Result<Vec<f64>> {
        svd::singular_values(self.na, self.nb, &self.entries)
    }

    /// Number of Schmidt coefficients above `tol`.
    pub fn schmidt_rank(&self, tol: f64) -> Result<usize> {
        Ok(self.schmidt_coefficients()?.iter().filter(|&&s| s > tol).count())
    }
}

/// `f(p, q) = sqrt(2/pi) (alpha beta - gamma^2)^{1/4} exp(-alpha p^2 - beta q^2 - 2 gamma p q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GaussianModeDistribution {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub spin_a: SpinLabel,
    #[cfg_attr(feature = "serde", serde(default))]
    pub spin_b: SpinLabel,
}

/// Relative slack on `gamma^2 <= alpha beta` so that parameters built from an
/// entanglement ratio of exactly 1 are accepted.
const BOUNDARY_SLACK: f64 = 1e-12;

impl GaussianModeDistribution {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let g = Self {
            alpha,
            beta,
            gamma,
            spin_a: SpinLabel(0),
            spin_b: SpinLabel(0),
        };
        g.validate()?;
        Ok(g)
    }

    /// Parameters with `gamma = sqrt(ratio alpha beta)`, `ratio = gamma^2 / (alpha beta)`.
    pub fn from_ratio(alpha: f64, beta: f64, ratio: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&ratio) {
            return Err(Error::InvalidGaussian("entanglement ratio must lie in [0, 1]"));
        }
        Self::new(alpha, beta, (ratio * alpha * beta).sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.beta.is_finite() && self.gamma.is_finite()) {
            return Err(Error::InvalidGaussian("parameters must be finite"));
        }
        if self.alpha <= 0.0 || self.beta <= 0.0 {
            return Err(Error::InvalidGaussian("alpha and beta must be positive"));
        }
        if self.gamma * self.gamma > self.alpha * self.beta * (1.0 + BOUNDARY_SLACK) {
            return Err(Error::InvalidGaussian("requires alpha beta >= gamma^2"));
        }
        Ok(())
    }

    /// `alpha beta - gamma^2`, clamped at zero.
    pub fn determinant(&self) -> f64 {
        (self.alpha * self.beta - self.gamma * self.gamma).max(0.0)
    }

    /// Entanglement measure `gamma^2 / (alpha beta)` in `[0, 1]`.
    pub fn entanglement(&self) -> f64 {
        (self.gamma * self.gamma / (self.alpha * self.beta)).min(1.0)
    }

    /// Separability measure `epsilon = sqrt(1 - gamma^2 / (alpha beta))`.
    pub fn epsilon(&self) -> f64 {
        (1.0 - self.entanglement()).max(0.0).sqrt()
    }

    /// `alpha beta > gamma^2` by more than the boundary slack; the
    /// distribution is then square integrable.
    pub fn is_strictly_valid(&self) -> bool {
        let ab = self.alpha * self.beta;
        ab - self.gamma * self.gamma > BOUNDARY_SLACK * ab
    }

    /// Normalization prefactor `sqrt(2/pi) (alpha beta - gamma^2)^{1/4}`.
    pub fn prefactor(&self) -> f64 {
        (2.0 / PI).sqrt() * self.determinant().powf(0.25)
    }

    pub fn amplitude(&self, p: f64, q: f64) -> f64 {
        self.prefactor() * (-self.alpha * p * p - self.beta * q * q - 2.0 * self.gamma * p * q).exp()
    }

    /// Standard deviations of the momenta `p` and `q` under `|f|^2`.
    pub fn momentum_std(&self) -> Result<(f64, f64)> {
        if !self.is_strictly_valid() {
            return Err(Error::InvalidGaussian("boundary distribution is not normalizable"));
        }
        let d = 4.0 * self.determinant();
        Ok(((self.beta / d).sqrt(), (self.alpha / d).sqrt()))
    }

    /// Samples the distribution at the midpoints of a uniform momentum grid,
    /// `f_nm = f(p_n, q_m) sqrt(dp dq)`, and renormalizes.
    pub fn discretize(&self, grid: &MomentumGrid) -> Result<Discretization> {
        if grid.points_p == 0 || grid.points_q == 0 {
            return Err(Error::EmptyShape);
        }
        let (sp, sq) = self.momentum_std()?;
        let (lp, lq) = grid
            .half_width
            .unwrap_or((DEFAULT_HALF_WIDTH_STDS * sp, DEFAULT_HALF_WIDTH_STDS * sq));
        if !(lp > 0.0 && lq > 0.0) {
            return Err(Error::InvalidGaussian("grid half-width must be positive"));
        }
        let dp = 2.0 * lp / grid.points_p as f64;
        let dq = 2.0 * lq / grid.points_q as f64;
        let weight = (dp * dq).sqrt();
        let mut entries = Vec::with_capacity(grid.points_p * grid.points_q);
        for n in 0..grid.points_p {
            let p = -lp + (n as f64 + 0.5) * dp;
            for m in 0..grid.points_q {
                let q = -lq + (m as f64 + 0.5) * dq;
                entries.push(Complex64::new(self.amplitude(p, q) * weight, 0.0));
            }
        }
        let raw: f64 = entries.iter().map(|z| z.norm_sqr()).sum();
        let defect = (raw - 1.0).abs();
        if defect.is_nan() || defect > DISCRETIZATION_TOL {
            return Err(Error::GridTooCoarse {
                defect,
                limit: DISCRETIZATION_TOL,
            });
        }
        let distribution =
            DiscreteModeDistribution::normalize(grid.points_p, grid.points_q, entries, self.spin_a, self.spin_b)?;
        Ok(Discretization {
            distribution,
            defect,
            spacing: (dp, dq),
        })
    }
}

/// Default grid half-width in standard deviations of `|f|^2`.
pub const DEFAULT_HALF_WIDTH_STDS: f64 = 6.0;

/// Largest accepted deviation of the raw sampled norm from 1.
pub const DISCRETIZATION_TOL: f64 = 1e-6;

/// Uniform midpoint grid over `[-L_p, L_p] x [-L_q, L_q]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumGrid {
    pub points_p: usize,
    pub points_q: usize,
    /// `(L_p, L_q)`; `None` uses [`DEFAULT_HALF_WIDTH_STDS`] standard deviations.
    pub half_width: Option<(f64, f64)>,
}

impl MomentumGrid {
    pub fn square(points: usize) -> Self {
        Self {
            points_p: points,
            points_q: points,
            half_width: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Discretization {
    pub distribution: DiscreteModeDistribution,
    /// `|sum |f|^2 - 1|` before renormalization.
    pub defect: f64,
    pub spacing: (f64, f64),
}

/// Three-particle amplitudes `f3[n][m][k]`: `n`, `m` index the modes of two
/// identical fermions with spins `r`, `s`; `k` indexes the modes of a
/// distinguishable partner with spin `spin_partner`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeParticleDistribution {
    n_fermion: usize,
    n_partner: usize,
    entries: Vec<Complex64>,
    pub spin_r: SpinLabel,
    pub spin_s: SpinLabel,
    pub spin_partner: SpinLabel,
}

impl ThreeParticleDistribution {
    /// Normalizes row-major entries indexed `(n * n_fermion + m) * n_partner + k`.
    pub fn normalize(
        n_fermion: usize,
        n_partner: usize,
        mut entries: Vec<Complex64>,
        spin_r: SpinLabel,
        spin_s: SpinLabel,
    ) -> Result<Self> {
        if n_fermion == 0 || n_partner == 0 {
            return Err(Error::EmptyShape);
        }
        let expected = n_fermion * n_fermion * n_partner;
        if entries.len() != expected {
            return Err(Error::EntryCount {
                expected,
                found: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm: f64 = entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::AllZero);
        }
        for z in entries.iter_mut() {
            *z /= norm;
        }
        Ok(Self {
            n_fermion,
            n_partner,
            entries,
            spin_r,
            spin_s,
            spin_partner: SpinLabel(0),
        })
    }

    pub fn n_fermion(&self) -> usize {
        self.n_fermion
    }

    pub fn n_partner(&self) -> usize {
        self.n_partner
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, n: usize, m: usize, k: usize) -> Complex64 {
        self.entries[(n * self.n_fermion + m) * self.n_partner + k]
    }

    /// Same amplitudes with the two fermion spin labels exchanged.
    pub fn with_swapped_spins(&self) -> Self {
        let mut out = self.clone();
        core::mem::swap(&mut out.spin_r, &mut out.spin_s);
        out
    }

    /// Largest `|f3[n][m][k] - sign f3[m][n][k]|`.
    pub fn exchange_residual(&self, sign: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for n in 0..self.n_fermion {
            for m in 0..self.n_fermion {
                for k in 0..self.n_partner {
                    worst = worst.max((self.get(n, m, k) - self.get(m, n, k) * sign).norm());
                }
            }
        }
        worst
    }
}
