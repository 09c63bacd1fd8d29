use thiserror::Error;

/// Errors raised by the numerical and combinatorial routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix data has {len} entries, expected {rows}x{cols}")]
    BadDimensions { rows: usize, cols: usize, len: usize },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NonSymmetric { asymmetry: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix has full rank, its kernel is trivial")]
    FullRank,
    #[error("matrix is numerically zero")]
    ZeroMatrix,
    #[error("rows are not orthonormal (||F F^T - I||_F = {residual:e})")]
    RowsNotOrthonormal { residual: f64 },
    #[error("columns are not orthonormal (||Q^T Q - I||_F = {residual:e})")]
    NonOrthonormalColumns { residual: f64 },
    #[error("cannot complete {rows} orthonormal rows in dimension {dim}")]
    NoRoomToComplete { rows: usize, dim: usize },

    #[error("a frame needs more vectors than dimensions (d = {d}, n = {n})")]
    InvalidFrameShape { d: usize, n: usize },
    #[error("vectors do not span: lower frame bound {lower:e} (upper {upper:e})")]
    NotSpanning { lower: f64, upper: f64 },
    #[error("frame is not Parseval: bounds ({lower:e}, {upper:e}), ||F F^T - I||_F = {residual:e}")]
    NotParseval {
        lower: f64,
        upper: f64,
        residual: f64,
    },
    #[error("not a positive semidefinite matrix: {reason}")]
    NotPsd { reason: String },
    #[error("matrix of size {n} has rank {rank}, expected 1..={max}", max = n.saturating_sub(1))]
    RankOutOfRange { rank: usize, n: usize },
    #[error("not an orthogonal projection: {reason}")]
    NotProjection { reason: String },
    #[error("cannot synthesize a frame from a rank-zero matrix")]
    RankZero,
    #[error("frame is not positively scalable")]
    NotScalable,
    #[error("linear program failed numerically: {0}")]
    LpNumericalFailure(String),

    #[error("matroid enumeration supports at most {max} columns, got {cols}")]
    TooManyColumns { cols: usize, max: usize },
    #[error("basis family is empty")]
    EmptyFamily,
    #[error("basis family contains subsets of different sizes")]
    UnequalSizes,
    #[error("basis {basis:?} is not a strictly increasing subset of 0..{ground_size}")]
    InvalidSubset {
        basis: Vec<usize>,
        ground_size: usize,
    },
    #[error("computed column family violates basis exchange")]
    NonMatroidFamily,

    #[error("invalid shape (n = {n}, d = {d}): {reason}")]
    InvalidShape { n: usize, d: usize, reason: String },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("unknown map {0:?}")]
    UnknownMap(String),
    #[error("unknown property {0:?}")]
    UnknownProperty(String),
    #[error("property {property} is not defined for the {map} map")]
    UnsupportedCheck { map: String, property: String },
    #[error("no constructive formula exists off the projections; the (b)+(c) extension is a pure existence argument")]
    NotConstructive,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
