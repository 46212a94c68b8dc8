use alloc::vec::Vec;

use num_complex::Complex64;

/// Error-free accumulation of floating-point terms (Shewchuk partials).
///
/// Terms that cancel exactly in real arithmetic cancel exactly here, so
/// the result does not depend on the order the terms arrive in.
#[derive(Debug, Default, Clone)]
pub(crate) struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn clear(&mut self) {
        self.partials.clear();
    }

    pub(crate) fn add(&mut self, mut x: f64) {
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                core::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        if x != 0.0 {
            self.partials.push(x);
        }
    }

    pub(crate) fn total(&self) -> f64 {
        self.partials.iter().rev().fold(0.0, |acc, &p| acc + p)
    }
}

/// Exact accumulation of complex terms, componentwise.
#[derive(Debug, Default, Clone)]
pub(crate) struct ExactComplexSum {
    re: ExactSum,
    im: ExactSum,
}

impl ExactComplexSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn clear(&mut self) {
        self.re.clear();
        self.im.clear();
    }

    pub(crate) fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub(crate) fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}

/// Dense row-major complex matrix product `lhs (r x k) * rhs (k x c)`.
pub(crate) fn matmul(lhs: &[Complex64], rhs: &[Complex64], rows: usize, inner: usize, cols: usize) -> Vec<Complex64> {
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); rows * cols];
    for i in 0..rows {
        for k in 0..inner {
            let l = lhs[i * inner + k];
            if l == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..cols {
                out[i * cols + j] += l * rhs[k * cols + j];
            }
        }
    }
    out
}

/// Conjugate transpose of a dense row-major `rows x cols` matrix.
pub(crate) fn adjoint(m: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            out[j * rows + i] = m[i * cols + j].conj();
        }
    }
    out
}

pub(crate) fn trace(m: &[Complex64], n: usize) -> Complex64 {
    (0..n).map(|i| m[i * n + i]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sum_cancels_regardless_of_order() {
        let a = 1e16_f64;
        let b = 1.0_f64;
        let c = 3.3_f64;
        let mut s = ExactSum::new();
        for x in [a, c, b, -a, -b, -c] {
            s.add(x);
        }
        assert_eq!(s.total(), 0.0);

        // naive left-to-right summation does not cancel here
        let naive = ((((a + c) + b) - a) - b) - c;
        assert_ne!(naive, 0.0);
    }

    #[test]
    fn exact_sum_matches_plain_sum_on_benign_input() {
        let mut s = ExactSum::new();
        for k in 1..=10 {
            s.add(k as f64);
        }
        assert_eq!(s.total(), 55.0);
    }
}
