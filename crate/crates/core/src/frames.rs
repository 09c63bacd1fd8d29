//! Frames, their Gram matrices, and the Naimark complement.
//!
//! Frames are identified with their Gram matrices `F^T F`, which forget the
//! left `O(d)` action; two frames are "the same" when their Gram matrices agree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, orthonormal_completion, sym_eig, Matrix, SpectralDecomposition, SYMMETRY_TOL,
};
use crate::lp::{self, LpOutcome, StandardFormLp};

/// Eigenvalues of a PSD member may dip this far (relative) below zero before rejection.
pub const PSD_NEGATIVE_TOL: f64 = 1e-10;
/// Accepted `||P^2 - P||_F` for projection members.
pub const IDEMPOTENCE_TOL: f64 = 1e-9;
/// Smallest `s_i = c_i^2` that still counts as strictly positive.
pub const POSITIVITY_TOL: f64 = 1e-8;
/// Accepted `||sum s_i v_i v_i^T - I||_F` for a scaling solution.
pub const SCALING_RESIDUAL_TOL: f64 = 1e-8;

/// Optimal frame bounds `(lambda_min(F F^T), lambda_max(F F^T))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// A `d x n` synthesis matrix whose `n > d` columns span `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    synthesis: Matrix,
    bounds: FrameBounds,
}

pub fn frame_bounds(f: &Matrix, tol: f64) -> Result<FrameBounds> {
    let (d, n) = f.shape();
    if n <= d {
        return Err(Error::InvalidFrameShape { d, n });
    }
    let spectrum = sym_eig(&f.outer_gram())?;
    let bounds = FrameBounds {
        lower: spectrum.lambda_min(),
        upper: spectrum.lambda_max(),
    };
    if spectrum.rank(tol) < d {
        return Err(Error::NotSpanning {
            lower: bounds.lower,
            upper: bounds.upper,
        });
    }
    Ok(bounds)
}

/// `||F F^T - I||_F`.
pub fn parseval_residual(f: &Matrix) -> f64 {
    (&f.outer_gram() - &Matrix::identity(f.rows())).frobenius_norm()
}

pub fn is_parseval(f: &Matrix, tol: f64) -> bool {
    parseval_residual(f) <= tol
}

impl Frame {
    pub fn new(synthesis: Matrix, tol: f64) -> Result<Self> {
        let bounds = frame_bounds(&synthesis, tol)?;
        Ok(Self { synthesis, bounds })
    }

    pub fn from_vectors<V: AsRef<[f64]>>(vectors: &[V], tol: f64) -> Result<Self> {
        Self::new(Matrix::from_columns(vectors)?, tol)
    }

    pub fn d(&self) -> usize {
        self.synthesis.rows()
    }

    pub fn n(&self) -> usize {
        self.synthesis.cols()
    }

    pub fn synthesis(&self) -> &Matrix {
        &self.synthesis
    }

    pub fn into_synthesis(self) -> Matrix {
        self.synthesis
    }

    pub fn bounds(&self) -> FrameBounds {
        self.bounds
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.synthesis.column(i)
    }

    pub fn is_parseval(&self, tol: f64) -> bool {
        is_parseval(&self.synthesis, tol)
    }

    pub fn is_tight(&self, tol: f64) -> bool {
        is_tight(self, tol)
    }

    /// `F^T F` as a raw matrix.
    pub fn gram_matrix(&self) -> Matrix {
        self.synthesis.gram()
    }
}

impl AsRef<Matrix> for Frame {
    fn as_ref(&self) -> &Matrix {
        &self.synthesis
    }
}

pub fn is_tight(f: &Frame, tol: f64) -> bool {
    let FrameBounds { lower, upper } = f.bounds;
    upper - lower <= tol * upper.max(1.0)
}

/// A nonzero, rank-deficient, symmetric PSD matrix with its spectrum cached.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMember {
    mat: Matrix,
    spectrum: SpectralDecomposition,
    rank: usize,
}

impl PsdMember {
    pub fn new(mat: Matrix, tol: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NonSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let asymmetry = mat.asymmetry();
        if asymmetry > SYMMETRY_TOL * mat.frobenius_norm().max(1.0) {
            return Err(Error::NonSymmetric { asymmetry });
        }
        let mat = mat.symmetrized();
        let mut spectrum = sym_eig(&mat)?;
        let floor = -PSD_NEGATIVE_TOL * spectrum.lambda_max().max(1.0);
        if spectrum.lambda_min() < floor {
            return Err(Error::NotPsd {
                reason: format!("eigenvalue {:e} is negative", spectrum.lambda_min()),
            });
        }
        spectrum.eigenvalues.iter_mut().for_each(|l| *l = l.max(0.0));
        let n = mat.rows();
        let rank = spectrum.rank(tol);
        if rank == 0 {
            return Err(Error::ZeroMatrix);
        }
        if rank >= n {
            return Err(Error::RankOutOfRange { rank, n });
        }
        Ok(Self {
            mat,
            spectrum,
            rank,
        })
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn lambda_max(&self) -> f64 {
        self.spectrum.lambda_max()
    }

    /// The `rank`-th largest eigenvalue, i.e. the smallest positive one.
    pub fn smallest_positive_eigenvalue(&self) -> f64 {
        self.spectrum.eigenvalues[self.rank - 1]
    }

    /// Orthonormal kernel basis as columns (`n x (n - rank)`).
    pub fn kernel_basis(&self) -> Matrix {
        self.spectrum.eigenvector_block(self.rank..self.n())
    }

    /// True when two positive eigenvalues differ by more than `gap` (relative to `lambda_max`).
    pub fn has_distinct_positive_eigenvalues(&self, gap: f64) -> bool {
        let positive = &self.spectrum.eigenvalues[..self.rank];
        positive[0] - positive[self.rank - 1] > gap * positive[0].max(1.0)
    }

    /// Orthogonal projection onto the kernel.
    pub fn kernel_projection(&self) -> Matrix {
        linalg::projector(&self.kernel_basis())
    }

    /// Orthogonal projection onto the range.
    pub fn range_projection(&self) -> Matrix {
        linalg::projector(&self.spectrum.eigenvector_block(0..self.rank))
    }
}

impl AsRef<Matrix> for PsdMember {
    fn as_ref(&self) -> &Matrix {
        &self.mat
    }
}

/// A rank-`d` orthogonal projection with `1 <= d <= n - 1`.
///
/// `I - P` is computed once on construction and stored next to `P`; the
/// Naimark complement swaps the two, so complementing twice returns the
/// original bits.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMember {
    mat: Matrix,
    complement: Matrix,
    rank: usize,
}

impl ProjectionMember {
    pub fn new(mat: Matrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NonSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let asymmetry = mat.asymmetry();
        if asymmetry > SYMMETRY_TOL {
            return Err(Error::NotProjection {
                reason: format!("||P^T - P||_F = {asymmetry:e}"),
            });
        }
        let mat = mat.symmetrized();
        let idempotence = (&(&mat * &mat) - &mat).frobenius_norm();
        if idempotence > IDEMPOTENCE_TOL {
            return Err(Error::NotProjection {
                reason: format!("||P^2 - P||_F = {idempotence:e}"),
            });
        }
        let spectrum = sym_eig(&mat)?;
        if let Some(bad) = spectrum
            .eigenvalues
            .iter()
            .find(|&&l| l.abs().min((l - 1.0).abs()) > IDEMPOTENCE_TOL)
        {
            return Err(Error::NotProjection {
                reason: format!("eigenvalue {bad} is neither 0 nor 1"),
            });
        }
        let n = mat.rows();
        let rank = spectrum.eigenvalues.iter().filter(|&&l| l > 0.5).count();
        if rank == 0 || rank == n {
            return Err(Error::RankOutOfRange { rank, n });
        }
        let complement = &Matrix::identity(n) - &mat;
        Ok(Self {
            mat,
            complement,
            rank,
        })
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    /// The same projection viewed as a member of the PSD set.
    pub fn to_psd(&self, tol: f64) -> Result<PsdMember> {
        PsdMember::new(self.mat.clone(), tol)
    }
}

impl AsRef<Matrix> for ProjectionMember {
    fn as_ref(&self) -> &Matrix {
        &self.mat
    }
}

/// `F^T F` for a frame.
pub fn gram(f: &Frame, tol: f64) -> Result<PsdMember> {
    PsdMember::new(f.synthesis.gram(), tol)
}

/// Spectral factor of a PSD member: rows `sqrt(lambda_i) v_i^T` for the positive
/// eigenvalues, in decreasing order.
pub fn synthesize(g: &PsdMember, tol: f64) -> Result<Frame> {
    let rank = g.rank();
    if rank == 0 {
        return Err(Error::RankZero);
    }
    let s = g.spectrum();
    let n = g.n();
    let rows = Matrix::from_fn(rank, n, |i, j| s.eigenvalues[i].sqrt() * s.eigenvectors[(j, i)]);
    Frame::new(rows, tol)
}

/// Naimark complement of a Parseval frame by orthonormal row completion.
pub fn naimark_complement_parseval(f: &Frame, tol: f64) -> Result<Frame> {
    let residual = parseval_residual(&f.synthesis);
    if residual > tol {
        return Err(Error::NotParseval {
            lower: f.bounds.lower,
            upper: f.bounds.upper,
            residual,
        });
    }
    let g = orthonormal_completion(&f.synthesis, tol)?;
    Frame::new(g, tol)
}

/// Naimark complement in the Gram picture: `P -> I - P`.
pub fn naimark_gram(p: &ProjectionMember) -> ProjectionMember {
    ProjectionMember {
        mat: p.complement.clone(),
        complement: p.mat.clone(),
        rank: p.n() - p.rank,
    }
}

/// Positive scalars `c_i` with `(c_i v_i)` Parseval, from the max-min program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSolution {
    pub scalars: Vec<f64>,
    /// `min c_i^2`
    pub margin: f64,
    /// `||sum c_i^2 v_i v_i^T - I||_F`
    pub residual: f64,
}

impl ScalingSolution {
    pub fn squared(&self) -> Vec<f64> {
        self.scalars.iter().map(|c| c * c).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scalability {
    Scalable(ScalingSolution),
    Infeasible,
}

impl Scalability {
    pub fn solution(&self) -> Option<&ScalingSolution> {
        match self {
            Scalability::Scalable(s) => Some(s),
            Scalability::Infeasible => None,
        }
    }
}

/// `||sum s_i v_i v_i^T - I||_F` for squared scalars `s`.
pub fn scaling_residual(f: &Matrix, squared_scalars: &[f64]) -> f64 {
    let scaled = f.scale_columns(&squared_scalars.iter().map(|s| s.sqrt()).collect::<Vec<_>>());
    parseval_residual(&scaled)
}

pub fn scalability_solve(f: &Frame) -> Result<Scalability> {
    scalability_solve_with(f, POSITIVITY_TOL)
}

/// Solves `maximize t  s.t.  sum s_i v_i v_i^T = I,  s_i >= t` with the
/// substitution `s_i = t + w_i`, `t, w_i >= 0`, over the upper triangle of the
/// `d x d` equality. Scalable iff the optimum has `t > positivity_tol`.
pub fn scalability_solve_with(f: &Frame, positivity_tol: f64) -> Result<Scalability> {
    let (d, n) = f.synthesis.shape();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j..d).map(move |k| (j, k))).collect();
    let v = &f.synthesis;
    let a = Matrix::from_fn(pairs.len(), n + 1, |row, col| {
        let (j, k) = pairs[row];
        if col == 0 {
            (0..n).map(|i| v[(j, i)] * v[(k, i)]).sum()
        } else {
            v[(j, col - 1)] * v[(k, col - 1)]
        }
    });
    let b = pairs
        .iter()
        .map(|&(j, k)| if j == k { 1.0 } else { 0.0 })
        .collect();
    let mut c = vec![0.0; n + 1];
    c[0] = 1.0;

    match lp::solve(&StandardFormLp { a, b, c })? {
        LpOutcome::Infeasible => Ok(Scalability::Infeasible),
        LpOutcome::Unbounded => Err(Error::LpNumericalFailure(
            "max-min scaling program reported unbounded".into(),
        )),
        LpOutcome::Optimal { x, .. } => {
            let t = x[0];
            if t <= positivity_tol {
                return Ok(Scalability::Infeasible);
            }
            let squared: Vec<f64> = x[1..].iter().map(|w| t + w).collect();
            let residual = scaling_residual(v, &squared);
            if residual > SCALING_RESIDUAL_TOL {
                return Err(Error::LpNumericalFailure(format!(
                    "scaling residual {residual:e} exceeds {SCALING_RESIDUAL_TOL:e}"
                )));
            }
            let margin = squared.iter().copied().fold(f64::INFINITY, f64::min);
            Ok(Scalability::Scalable(ScalingSolution {
                scalars: squared.iter().map(|s| s.sqrt()).collect(),
                margin,
                residual,
            }))
        }
    }
}

/// Output of the scale / complement / un-scale construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledComplement {
    pub frame: Frame,
    /// Scalars that make the input Parseval; they also make `frame` Parseval.
    pub scalars: Vec<f64>,
}

/// Scale to Parseval with the max-min scalars, complement, and un-scale.
pub fn scalable_extension(f: &Frame, tol: f64) -> Result<ScaledComplement> {
    match scalability_solve(f)? {
        Scalability::Infeasible => Err(Error::NotScalable),
        Scalability::Scalable(sol) => scalable_extension_with(f, &sol.scalars, tol),
    }
}

/// The same construction with caller-supplied positive scalars.
///
/// The output's `i`-th vector is `g_i / c_i`, where `g` is the Naimark
/// complement of `(c_i v_i)`. Scaling the output by the same `c` gives `g`
/// back, so a second application with `scalars` recovers the Gram matrix of `f`.
pub fn scalable_extension_with(f: &Frame, scalars: &[f64], tol: f64) -> Result<ScaledComplement> {
    if scalars.len() != f.n() || scalars.iter().any(|&c| !(c > 0.0)) {
        return Err(Error::NotScalable);
    }
    let scaled = f.synthesis.scale_columns(scalars);
    let residual = parseval_residual(&scaled);
    if residual > SCALING_RESIDUAL_TOL {
        return Err(Error::NotParseval {
            lower: f.bounds.lower,
            upper: f.bounds.upper,
            residual,
        });
    }
    let g = orthonormal_completion(&scaled, SCALING_RESIDUAL_TOL)?;
    let inverse: Vec<f64> = scalars.iter().map(|c| 1.0 / c).collect();
    let frame = Frame::new(g.scale_columns(&inverse), tol)?;
    Ok(ScaledComplement {
        frame,
        scalars: scalars.to_vec(),
    })
}
