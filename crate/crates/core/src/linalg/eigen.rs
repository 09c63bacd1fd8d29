//! Symmetric eigendecomposition by cyclic Jacobi rotations, plus a one-sided
//! Jacobi SVD used where small singular values must be resolved accurately.

use std::cmp::Ordering;

use super::Matrix;
use crate::error::{Error, Result};

/// Relative asymmetry accepted by [`sym_eig`], measured as `||S - S^T||_F / max(1, ||S||_F)`.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Sweeps stop once the off-diagonal Frobenius norm drops below this fraction of `||S||_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;
/// Coordinates at or below this magnitude are skipped when fixing eigenvector signs.
pub const SIGN_TOL: f64 = 1e-8;
/// Eigenvalues closer than this (relative to `max(1, |lambda|_max)`) are treated as one cluster.
const CLUSTER_TOL: f64 = 1e-12;

/// Eigenvalues in non-increasing order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_min(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k)
    }

    /// Columns `range` of the eigenvector matrix.
    pub fn eigenvector_block(&self, range: std::ops::Range<usize>) -> Matrix {
        let cols: Vec<usize> = range.collect();
        self.eigenvectors.select_columns(&cols)
    }

    /// `V diag(lambda) V^T`.
    pub fn reconstruct(&self) -> Matrix {
        self.reconstruct_with(&self.eigenvalues)
    }

    pub fn reconstruct_with(&self, eigenvalues: &[f64]) -> Matrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = Matrix::zeros(n, n);
        for (k, &lambda) in eigenvalues.iter().enumerate() {
            if lambda == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = lambda * v[(i, k)];
                for j in 0..n {
                    out[(i, j)] += vi * v[(j, k)];
                }
            }
        }
        out
    }

    /// Number of eigenvalues strictly above `tol * max(lambda_max, 1)`.
    pub fn rank(&self, tol: f64) -> usize {
        let threshold = tol * self.lambda_max().max(1.0);
        self.eigenvalues.iter().filter(|&&l| l > threshold).count()
    }
}

fn check_symmetric(s: &Matrix) -> Result<()> {
    if !s.is_square() {
        return Err(Error::NonSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    let asymmetry = s.asymmetry();
    if asymmetry > SYMMETRY_TOL * s.frobenius_norm().max(1.0) {
        return Err(Error::NonSymmetric { asymmetry });
    }
    Ok(())
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a symmetric matrix.
///
/// The input is symmetrized before iterating, so asymmetry within
/// [`SYMMETRY_TOL`] is averaged out. Output is sorted by eigenvalue
/// (non-increasing); each eigenvector has its first coordinate of magnitude
/// above [`SIGN_TOL`] positive, and eigenvectors inside a cluster of equal
/// eigenvalues are ordered lexicographically (largest first).
pub fn sym_eig(s: &Matrix) -> Result<SpectralDecomposition> {
    check_symmetric(s)?;
    let n = s.rows();
    let mut a = s.symmetrized();
    let mut v = Matrix::identity(n);
    let threshold = OFF_DIAGONAL_TOL * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NonConvergence { sweeps: MAX_SWEEPS });
    }

    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|k| {
            let mut col = v.column(k);
            fix_sign(&mut col);
            (a[(k, k)], col)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    order_clusters(&mut pairs);

    let eigenvalues = pairs.iter().map(|p| p.0).collect();
    let eigenvectors = Matrix::from_fn(n, n, |i, k| pairs[k].1[i]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation annihilating `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = a.rows();
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_p = c * akp - s * akq;
        let new_q = s * akp + c * akq;
        a[(k, p)] = new_p;
        a[(p, k)] = new_p;
        a[(k, q)] = new_q;
        a[(q, k)] = new_q;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

fn fix_sign(x: &mut [f64]) {
    if let Some(&first) = x.iter().find(|c| c.abs() > SIGN_TOL) {
        if first < 0.0 {
            x.iter_mut().for_each(|c| *c = -*c);
        }
    }
}

fn lex_desc(x: &[f64], y: &[f64]) -> Ordering {
    for (a, b) in x.iter().zip(y) {
        match b.total_cmp(a) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Reorders eigenvectors inside each eigenvalue cluster lexicographically.
/// The cluster's eigenvalues keep their sorted positions.
fn order_clusters(pairs: &mut [(f64, Vec<f64>)]) {
    let scale = pairs.iter().fold(1.0f64, |m, p| m.max(p.0.abs()));
    let tol = CLUSTER_TOL * scale;
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end - 1].0 - pairs[end].0 <= tol {
            end += 1;
        }
        if end - start > 1 {
            let values: Vec<f64> = pairs[start..end].iter().map(|p| p.0).collect();
            pairs[start..end].sort_by(|x, y| lex_desc(&x.1, &y.1));
            for (p, v) in pairs[start..end].iter_mut().zip(values) {
                p.0 = v;
            }
        }
        start = end;
    }
}

/// Count of eigenvalues strictly greater than `tol * max(lambda_max, 1)`.
pub fn numerical_rank(s: &Matrix, tol: f64) -> Result<usize> {
    Ok(sym_eig(s)?.rank(tol))
}

/// Singular values in non-increasing order, by one-sided (Hestenes) Jacobi.
///
/// Small singular values are resolved to roughly `eps * sigma_max` absolute
/// accuracy, which the normal-equations route cannot offer.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    let work = if a.rows() >= a.cols() {
        a.clone()
    } else {
        a.transpose()
    };
    let (m, k) = work.shape();
    // columns stored contiguously
    let mut cols: Vec<Vec<f64>> = (0..k).map(|j| work.column(j)).collect();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let alpha: f64 = cols[p].iter().map(|x| x * x).sum();
                let beta: f64 = cols[q].iter().map(|x| x * x).sum();
                let gamma: f64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let up = cols[p][i];
                    let uq = cols[q][i];
                    cols[p][i] = c * up - s * uq;
                    cols[q][i] = s * up + c * uq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { sweeps: MAX_SWEEPS });
    }
    let mut sigma: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    sigma.sort_by(|x, y| y.total_cmp(x));
    Ok(sigma)
}
