use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_complex::Complex64;

use super::FockSpace;
use crate::numeric::{ExactComplexSum, ExactSum};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Sparse complex matrix over the basis of a [`FockSpace`], stored row-major
/// (CSR) with column indices ascending inside each row.
///
/// Every entry is an error-free sum of its contributions, so products and
/// linear combinations are independent of accumulation order and exactly
/// cancelling terms leave no residue.
#[derive(Debug, Clone)]
pub struct OperatorMatrix<'s> {
    space: &'s FockSpace,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl<'s> OperatorMatrix<'s> {
    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(space: &'s FockSpace, mut triplets: Vec<(usize, usize, Complex64)>) -> Self {
        let dim = space.dim();
        triplets.sort_unstable_by_key(|t| (t.0, t.1));
        let mut row_ptr = alloc::vec![0usize; dim + 1];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut acc = ExactComplexSum::new();
        let mut k = 0;
        while k < triplets.len() {
            let (r, c, _) = triplets[k];
            debug_assert!(r < dim && c < dim);
            acc.clear();
            while k < triplets.len() && triplets[k].0 == r && triplets[k].1 == c {
                acc.add(triplets[k].2);
                k += 1;
            }
            let v = acc.total();
            if v != ZERO {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            space,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn zero(space: &'s FockSpace) -> Self {
        Self::from_triplets(space, Vec::new())
    }

    pub fn identity(space: &'s FockSpace) -> Self {
        let triplets = (0..space.dim()).map(|i| (i, i, Complex64::new(1.0, 0.0))).collect();
        Self::from_triplets(space, triplets)
    }

    pub fn space(&self) -> &'s FockSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.vals[span].iter().copied())
    }

    /// All stored `(row, col, value)` entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim()).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(k) => self.vals[span.start + k],
            Err(_) => ZERO,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    fn check_space(&self, other: &OperatorMatrix<'_>) -> Result<()> {
        if core::ptr::eq(self.space, other.space) || self.space.config == other.space.config {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let triplets = self.entries().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.space, triplets)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let triplets = self.entries().map(|(r, c, v)| (r, c, v * factor)).collect();
        Self::from_triplets(self.space, triplets)
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &OperatorMatrix<'_>) -> Result<Self> {
        self.check_space(rhs)?;
        let mut triplets = Vec::new();
        for r in 0..self.dim() {
            for (k, a) in self.row(r) {
                for (c, b) in rhs.row(k) {
                    triplets.push((r, c, a * b));
                }
            }
        }
        Ok(Self::from_triplets(self.space, triplets))
    }

    /// `sum_i coeff_i * op_i` over operators on the same space.
    pub fn linear_combination(space: &'s FockSpace, terms: &[(Complex64, &OperatorMatrix<'_>)]) -> Result<Self> {
        let mut triplets = Vec::new();
        for (coeff, op) in terms {
            if !(core::ptr::eq(space, op.space) || space.config == op.space.config) {
                return Err(Error::SpaceMismatch);
            }
            if *coeff == ZERO {
                continue;
            }
            triplets.extend(op.entries().map(|(r, c, v)| (r, c, v * coeff)));
        }
        Ok(Self::from_triplets(space, triplets))
    }

    pub fn add(&self, rhs: &OperatorMatrix<'_>) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        Self::linear_combination(self.space, &[(one, self), (one, rhs)])
    }

    pub fn sub(&self, rhs: &OperatorMatrix<'_>) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        Self::linear_combination(self.space, &[(one, self), (-one, rhs)])
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.dim() {
            return Err(Error::SpaceMismatch);
        }
        let mut acc = ExactComplexSum::new();
        let amps = (0..self.dim())
            .map(|r| {
                acc.clear();
                for (c, v) in self.row(r) {
                    acc.add(v * state.amps[c]);
                }
                acc.total()
            })
            .collect();
        Ok(StateVector { amps })
    }

    /// Largest `|self - other|` over entries whose column satisfies `columns`.
    pub fn max_abs_diff_on_columns(&self, other: &OperatorMatrix<'_>, columns: &[bool]) -> Result<f64> {
        let diff = self.sub(other)?;
        Ok(diff
            .entries()
            .filter(|&(_, c, _)| columns[c])
            .fold(0.0, |worst: f64, (_, _, v)| worst.max(v.norm())))
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix<'_>) -> Result<f64> {
        let all = alloc::vec![true; self.dim()];
        self.max_abs_diff_on_columns(other, &all)
    }

    /// One `row col re im` line per stored entry.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (r, c, v) in self.entries() {
            let _ = writeln!(out, "{r} {c} {:e} {:e}", v.re, v.im);
        }
        out
    }
}

/// `AB - BA`, or `AB + BA` when `anti` is set.
pub fn commutator<'s>(a: &OperatorMatrix<'s>, b: &OperatorMatrix<'_>, anti: bool) -> Result<OperatorMatrix<'s>> {
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    let one = Complex64::new(1.0, 0.0);
    let sign = if anti { one } else { -one };
    OperatorMatrix::linear_combination(a.space, &[(one, &ab), (sign, &ba)])
}

/// `<psi|A|psi> / <psi|psi>`.
pub fn expectation(state: &StateVector, op: &OperatorMatrix<'_>) -> Result<Complex64> {
    let norm = state.norm_sqr();
    if norm == 0.0 {
        return Err(Error::ZeroState);
    }
    let image = op.apply(state)?;
    Ok(state.inner(&image)? / norm)
}

/// Dense complex amplitudes over a Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            amps: alloc::vec![ZERO; dim],
        }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut s = Self::zeros(dim);
        s.amps[index] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut acc = ExactSum::new();
        for z in &self.amps {
            acc.add(z.norm_sqr());
        }
        acc.total()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::SpaceMismatch);
        }
        let mut acc = ExactComplexSum::new();
        for (x, y) in self.amps.iter().zip(&other.amps) {
            acc.add(x.conj() * y);
        }
        Ok(acc.total())
    }

    /// Every amplitude is exactly zero (no tolerance).
    pub fn is_exact_zero(&self) -> bool {
        self.amps.iter().all(|&z| z == ZERO)
    }
}
