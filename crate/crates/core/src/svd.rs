//! One-sided (Hestenes) Jacobi SVD for small dense real matrices.
//!
//! Columns of the working copy are rotated pairwise until every pair is
//! orthogonal to relative tolerance [`JACOBI_TOL`]. On exit `A·V = W` where
//! the columns of `W` are `σ_i u_i`, so the singular values are the column
//! norms of `W`. Keeping `W` unnormalised lets callers apply any spectral
//! filter `f(σ)` as `W·diag(f(σ)/σ)·Vᵀ` without dividing by tiny singular
//! values.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Relative orthogonality tolerance for a column pair.
pub const JACOBI_TOL: f64 = 1e-12;

/// Sweep bound before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Largest dimension the dense routines are intended for.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone)]
pub struct Svd {
    /// `A·V`, columns ordered by decreasing singular value.
    pub scaled_left: DMatrix<f64>,
    /// Singular values in nonincreasing order.
    pub singular_values: Vec<f64>,
    /// Right singular vectors as columns.
    pub right: DMatrix<f64>,
}

impl Svd {
    pub fn largest(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Rebuilds `U·diag(g(σ))·Vᵀ` where `g` maps each singular value to
    /// its replacement.
    pub fn reconstruct_with(&self, g: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let n = self.right.nrows();
        let m = self.scaled_left.nrows();
        let mut out = DMatrix::zeros(m, n);
        for (k, &sigma) in self.singular_values.iter().enumerate() {
            if sigma == 0.0 {
                continue;
            }
            let factor = g(sigma) / sigma;
            if factor == 0.0 {
                continue;
            }
            let w = self.scaled_left.column(k);
            let v = self.right.column(k);
            out += (w * v.transpose()) * factor;
        }
        out
    }
}

/// Computes the SVD of `a` by one-sided Jacobi rotations.
pub fn jacobi_svd(a: &DMatrix<f64>) -> Result<Svd> {
    let m = a.nrows();
    let n = a.ncols();
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    alpha += wp * wp;
                    beta += wq * wq;
                    gamma += wp * wq;
                }
                if gamma == 0.0 || gamma.abs() <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    w[(i, p)] = c * wp - s * wq;
                    w[(i, q)] = s * wp + c * wq;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<f64> = (0..n).map(|k| w.column(k).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let mut scaled_left = DMatrix::zeros(m, n);
    let mut right = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        scaled_left.set_column(dst, &w.column(src));
        right.set_column(dst, &v.column(src));
    }
    Ok(Svd {
        scaled_left,
        singular_values: order.iter().map(|&k| norms[k]).collect(),
        right,
    })
}

/// Largest singular value of `a`.
pub fn spectral_norm(a: &DMatrix<f64>) -> Result<f64> {
    if a.is_empty() {
        return Ok(0.0);
    }
    Ok(jacobi_svd(a)?.largest())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn diagonal_singular_values() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, 0.0, 0.0, 0.0, -0.5, 0.0, 0.0, 0.0, 3.0]);
        let svd = jacobi_svd(&a).unwrap();
        assert_eq!(svd.singular_values, vec![3.0, 2.0, 0.5]);
    }

    #[test]
    fn reconstructs_input() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.5, -1.0, 0.3, 4.0, 2.2, -0.7, 0.1]);
        let svd = jacobi_svd(&a).unwrap();
        let back = svd.reconstruct_with(|s| s);
        for (x, y) in a.iter().zip(back.iter()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn rank_deficient_and_zero() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let svd = jacobi_svd(&a).unwrap();
        assert_abs_diff_eq!(svd.singular_values[0], 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(svd.singular_values[1], 0.0, epsilon = 1e-12);
        assert_eq!(spectral_norm(&DMatrix::zeros(4, 4)).unwrap(), 0.0);
        assert_eq!(spectral_norm(&DMatrix::zeros(0, 0)).unwrap(), 0.0);
    }

    #[test]
    fn clipping_filter() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        let k = jacobi_svd(&a).unwrap().reconstruct_with(|s| s.min(1.0));
        assert_abs_diff_eq!(k[(0, 0)], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k[(1, 1)], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(k[(0, 1)], 0.0, epsilon = 1e-15);
    }
}
