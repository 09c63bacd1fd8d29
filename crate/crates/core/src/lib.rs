//! Naimark complements of finite frames and their extensions to arbitrary
//! frames.
//!
//! Parseval frames of `n` vectors in `R^d` are represented by their Gram
//! matrices, the rank-`d` orthogonal projections, where the Naimark complement
//! is `P -> I - P`. The crate provides that complement in both the synthesis
//! and Gram pictures, two extensions of it to all rank-deficient PSD matrices
//! (the spectral shift `lambda_max(A) I - A` and the kernel projection), a
//! scale/complement/un-scale extension for positively scalable frames, and the
//! column-matroid machinery needed to test the Gale property.

pub mod error;
pub mod extensions;
pub mod frames;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod matroids;
pub mod sampling;

pub use error::{Error, Result};
pub use extensions::{
    check_property, davis_kahan_check, gale_failure_witness, kernel_extension, spectral_shift,
    stratum_dimension, CheckConfig, DavisKahanCheck, ExtensionReport, Field, MapKind, Property,
    Sampler,
};
pub use frames::{
    frame_bounds, gram, is_parseval, is_tight, naimark_complement_parseval, naimark_gram,
    scalability_solve, scalable_extension, scalable_extension_with, synthesize, Frame,
    FrameBounds, ProjectionMember, PsdMember, Scalability, ScalingSolution,
};
pub use linalg::{Matrix, DEFAULT_TOL};
pub use matroids::{
    check_basis_exchange, gale_dual, is_gale_pair, matroid_from_columns, verify_prop1, Matroid,
};
