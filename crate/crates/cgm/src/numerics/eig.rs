//! Symmetric eigendecomposition via cyclic Jacobi rotations, plus the
//! whitening helper built on it.
//!
//! Jacobi is slow past a few hundred rows but essentially exact for the
//! matrix sizes used here (covariances and normalized adjacencies up to
//! ~300x300), which is what the correlation loss needs.

use super::matrix::Matrix;
use crate::error::{CgmError, Result};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a symmetric matrix: `s = V diag(values) Vᵀ`.
///
/// Eigenvalues are returned in descending order with matching eigenvector
/// columns. The input is symmetrized as `(s + sᵀ)/2` before iterating.
pub fn sym_eig(s: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    if s.rows() != s.cols() {
        return Err(CgmError::Dimension(format!(
            "sym_eig: matrix is {}x{}, must be square",
            s.rows(),
            s.cols()
        )));
    }
    let n = s.rows();
    if n == 0 {
        return Ok((Vec::new(), Matrix::zeros(0, 0)));
    }

    // Work on the symmetrized copy.
    let mut a = Matrix::from_fn(n, n, |i, j| 0.5 * (s.get(i, j) + s.get(j, i)));
    let mut v = Matrix::identity(n);

    let scale = a.max_abs().max(1e-300);
    let tol = 1e-15 * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).abs());
            }
        }
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= tol * 1e-2 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                // Smaller-magnitude root keeps rotations stable.
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;

                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - sn * akq);
                    a.set(k, q, sn * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - sn * aqk);
                    a.set(q, k, sn * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - sn * vkq);
                    v.set(k, q, sn * vkp + c * vkq);
                }
            }
        }
    }
    if !converged {
        return Err(CgmError::Numerical(format!(
            "sym_eig: Jacobi sweeps did not converge within {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    Ok((values, vectors))
}

/// `V diag((λᵢ + ridge)^(-1/2)) Vᵀ` for a symmetric PSD matrix.
///
/// Fails when any shifted eigenvalue is at or below 1e-12 (singular
/// covariance); caller should raise the ridge.
pub fn inv_sqrt_psd(s: &Matrix, ridge: f64) -> Result<Matrix> {
    let (values, vectors) = sym_eig(s)?;
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let shifted = lambda + ridge;
        if shifted <= 1e-12 {
            return Err(CgmError::Numerical(format!(
                "inv_sqrt_psd: eigenvalue {lambda:.3e} + ridge {ridge:.3e} is singular; \
                 increase the ridge"
            )));
        }
        let w = 1.0 / shifted.sqrt();
        for i in 0..scaled.rows() {
            scaled.set(i, j, scaled.get(i, j) * w);
        }
    }
    scaled.matmul_nt(&vectors)
}
