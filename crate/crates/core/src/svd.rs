//! Singular values of small dense complex matrices by one-sided (Hestenes)
//! Jacobi rotations.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Singular values of the row-major `rows x cols` matrix `data`, sorted in
/// descending order. Returns `min(rows, cols)` values.
pub(crate) fn singular_values(rows: usize, cols: usize, data: &[Complex64]) -> Result<Vec<f64>> {
    debug_assert_eq!(data.len(), rows * cols);
    // Column-major working copy with no more columns than rows. Transposing
    // (without conjugation) leaves the singular values unchanged.
    let (m, n) = if cols <= rows { (rows, cols) } else { (cols, rows) };
    let mut a = alloc::vec![Complex64::new(0.0, 0.0); m * n];
    for i in 0..rows {
        for j in 0..cols {
            let v = data[i * cols + j];
            if cols <= rows {
                a[j * m + i] = v;
            } else {
                a[i * m + j] = v;
            }
        }
    }

    let frob_sq: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let negligible = frob_sq * f64::EPSILON * f64::EPSILON;
    let ortho_tol = m as f64 * f64::EPSILON;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta) = (0.0, 0.0);
                let mut gamma = Complex64::new(0.0, 0.0);
                for i in 0..m {
                    let x = a[p * m + i];
                    let y = a[q * m + i];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if alpha <= negligible || beta <= negligible || g <= ortho_tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let x = a[p * m + i];
                    let y = a[q * m + i] * phase.conj();
                    a[p * m + i] = x * c - y * s;
                    a[q * m + i] = (x * s + y * c) * phase;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalError("Jacobi SVD did not converge"));
    }

    let mut values: Vec<f64> = (0..n)
        .map(|j| a[j * m..(j + 1) * m].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}
