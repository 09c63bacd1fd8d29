use super::eigen::{singular_values, sym_eig, SpectralDecomposition};
use super::Matrix;
use crate::error::{Error, Result};

/// Residual norm below which a Gram-Schmidt candidate is treated as dependent.
pub const COMPLETION_PIVOT_TOL: f64 = 1e-8;
/// Accepted `||Q^T Q - I||_F` for orthonormal-column inputs.
pub const ORTHONORMAL_TOL: f64 = 1e-9;

/// `Q Q^T` for a matrix `Q` with orthonormal columns.
pub fn projector(q: &Matrix) -> Matrix {
    q.transpose().gram()
}

/// Orthonormal basis (as columns) of the eigenspace of eigenvalues at or below
/// `tol * max(lambda_max, 1)`, taken from an existing decomposition.
pub fn kernel_basis(spectrum: &SpectralDecomposition, tol: f64) -> Option<Matrix> {
    let n = spectrum.dim();
    let rank = spectrum.rank(tol);
    (rank < n).then(|| spectrum.eigenvector_block(rank..n))
}

/// Orthogonal projection onto the numerical kernel of a symmetric PSD matrix.
pub fn kernel_projection(a: &Matrix, tol: f64) -> Result<Matrix> {
    let spectrum = sym_eig(a)?;
    kernel_projection_from(&spectrum, tol)
}

fn kernel_projection_from(spectrum: &SpectralDecomposition, tol: f64) -> Result<Matrix> {
    match spectrum.rank(tol) {
        0 => Err(Error::ZeroMatrix),
        r if r == spectrum.dim() => Err(Error::FullRank),
        _ => Ok(projector(
            &kernel_basis(spectrum, tol).expect("rank below dimension"),
        )),
    }
}

/// Rows completing the orthonormal rows of `f` to an orthogonal matrix.
///
/// Gram-Schmidt (with one re-orthogonalization pass) over the standard basis
/// vectors `e_0, e_1, ...` in order, skipping candidates whose residual norm is
/// below [`COMPLETION_PIVOT_TOL`].
pub fn orthonormal_completion(f: &Matrix, tol: f64) -> Result<Matrix> {
    let (d, n) = f.shape();
    if d >= n {
        return Err(Error::NoRoomToComplete { rows: d, dim: n });
    }
    let residual = (&f.outer_gram() - &Matrix::identity(d)).frobenius_norm();
    if residual > tol {
        return Err(Error::RowsNotOrthonormal { residual });
    }

    let mut basis: Vec<Vec<f64>> = (0..d).map(|i| f.row(i).to_vec()).collect();
    let mut added = Vec::with_capacity(n - d);
    for k in 0..n {
        if added.len() == n - d {
            break;
        }
        let mut x = vec![0.0; n];
        x[k] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = x.iter().zip(b).map(|(a, b)| a * b).sum();
                x.iter_mut().zip(b).for_each(|(xi, bi)| *xi -= dot * bi);
            }
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < COMPLETION_PIVOT_TOL {
            continue;
        }
        x.iter_mut().for_each(|v| *v /= norm);
        basis.push(x.clone());
        added.push(x);
    }
    // n candidates always suffice: the standard basis spans the whole space.
    debug_assert_eq!(added.len(), n - d);
    Matrix::from_rows(&added)
}

fn check_orthonormal_columns(q: &Matrix) -> Result<()> {
    let residual = (&q.gram() - &Matrix::identity(q.cols())).frobenius_norm();
    if residual > ORTHONORMAL_TOL {
        return Err(Error::NonOrthonormalColumns { residual });
    }
    Ok(())
}

/// Sines of the principal angles between the column spaces of `q1` and `q2`,
/// in non-decreasing order.
///
/// The sines are the singular values of `(I - Q1 Q1^T) Q2`, which equal
/// `sqrt(1 - sigma^2)` for the singular values `sigma` of `Q1^T Q2` but keep
/// full accuracy for nearly aligned subspaces.
pub fn principal_angle_sines(q1: &Matrix, q2: &Matrix) -> Result<Vec<f64>> {
    if q1.shape() != q2.shape() {
        return Err(Error::ShapeMismatch {
            left: q1.shape(),
            right: q2.shape(),
        });
    }
    check_orthonormal_columns(q1)?;
    check_orthonormal_columns(q2)?;
    let overlap = q1.transpose().matmul(q2)?;
    let residual = q2.try_sub(&q1.matmul(&overlap)?)?;
    let mut sines: Vec<f64> = singular_values(&residual)?
        .into_iter()
        .map(|s| s.min(1.0))
        .collect();
    sines.reverse();
    Ok(sines)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &Matrix, b: &Matrix, tol: f64) {
        let d = (a - b).frobenius_norm();
        assert!(d <= tol, "distance {d:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn kernel_projection_examples() {
        let k = kernel_projection(&Matrix::from_diag(&[2.0, 1.0, 0.0]), 1e-9).unwrap();
        assert_eq!(k, Matrix::from_diag(&[0.0, 0.0, 1.0]));
        let k = kernel_projection(&Matrix::from_diag(&[2.0, 0.0]), 1e-9).unwrap();
        assert_eq!(k, Matrix::from_diag(&[0.0, 1.0]));

        let j = Matrix::from_fn(3, 3, |_, _| 1.0 / 3.0);
        let k = kernel_projection(&j, 1e-9).unwrap();
        assert_close(&k, &(&Matrix::identity(3) - &j), 1e-14);
    }

    #[test]
    fn kernel_projection_errors() {
        assert_eq!(
            kernel_projection(&Matrix::zeros(2, 2), 1e-9),
            Err(Error::ZeroMatrix)
        );
        assert_eq!(
            kernel_projection(&Matrix::identity(2), 1e-9),
            Err(Error::FullRank)
        );
    }

    #[test]
    fn completion_of_single_row() {
        let r = 0.5f64.sqrt();
        let f = Matrix::from_rows(&[[r, r]]).unwrap();
        let g = orthonormal_completion(&f, 1e-9).unwrap();
        assert_eq!(g.shape(), (1, 2));
        assert!((g[(0, 0)] - r).abs() < 1e-15);
        assert!((g[(0, 1)] + r).abs() < 1e-15);
    }

    #[test]
    fn completion_of_coordinate_rows() {
        let f = Matrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let g = orthonormal_completion(&f, 1e-9).unwrap();
        assert_eq!(g, Matrix::from_rows(&[[0.0, 0.0, 1.0]]).unwrap());
    }

    #[test]
    fn completion_of_mercedes_benz() {
        let s = (2.0f64 / 3.0).sqrt();
        let h = 3f64.sqrt() / 2.0;
        let f = Matrix::from_rows(&[[0.0, -h * s, h * s], [s, -0.5 * s, -0.5 * s]]).unwrap();
        let g = orthonormal_completion(&f, 1e-9).unwrap();
        for &x in g.data() {
            assert!((x.abs() - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        }
        let full = f.vstack(&g).unwrap();
        assert_close(&full.outer_gram(), &Matrix::identity(3), 1e-14);
    }

    #[test]
    fn completion_errors() {
        let f = Matrix::from_rows(&[[1.0, 1.0]]).unwrap();
        assert!(matches!(
            orthonormal_completion(&f, 1e-9),
            Err(Error::RowsNotOrthonormal { .. })
        ));
        assert!(matches!(
            orthonormal_completion(&Matrix::identity(2), 1e-9),
            Err(Error::NoRoomToComplete { rows: 2, dim: 2 })
        ));
    }

    #[test]
    fn principal_angle_examples() {
        let e1 = Matrix::from_rows(&[[1.0], [0.0]]).unwrap();
        let e2 = Matrix::from_rows(&[[0.0], [1.0]]).unwrap();
        assert_eq!(principal_angle_sines(&e1, &e1).unwrap(), vec![0.0]);
        assert!((principal_angle_sines(&e1, &e2).unwrap()[0] - 1.0).abs() < 1e-15);
        let t = 30f64.to_radians();
        let q = Matrix::from_rows(&[[t.cos()], [t.sin()]]).unwrap();
        assert!((principal_angle_sines(&e1, &q).unwrap()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn principal_angle_errors() {
        let e1 = Matrix::from_rows(&[[1.0], [0.0]]).unwrap();
        let not_unit = Matrix::from_rows(&[[2.0], [0.0]]).unwrap();
        assert!(matches!(
            principal_angle_sines(&e1, &Matrix::identity(2)),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            principal_angle_sines(&e1, &not_unit),
            Err(Error::NonOrthonormalColumns { .. })
        ));
    }
}
