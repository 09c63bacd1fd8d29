//! Seeded random generators for frames, projections and PSD matrices.
//!
//! Every trial draws from its own ChaCha20 stream keyed by `(seed, trial)`, so
//! results do not depend on the order in which trials are evaluated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::{sym_eig, Matrix};

/// Identifier recorded in reports so that a run can be reproduced exactly.
pub const RNG_ALGORITHM: &str = "chacha20 (rand_chacha 0.9): seed_from_u64(seed), set_stream(trial)";

pub type TrialRng = ChaCha20Rng;

pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Haar-distributed orthogonal matrix: Gram-Schmidt on a Gaussian matrix with
/// the `R` factor's diagonal made positive.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    loop {
        let g = gaussian_matrix(n, n, rng);
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut x = g.column(j);
            let original_norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            for _ in 0..2 {
                for b in &cols {
                    let dot: f64 = x.iter().zip(b).map(|(a, b)| a * b).sum();
                    x.iter_mut().zip(b).for_each(|(xi, bi)| *xi -= dot * bi);
                }
            }
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-6 * original_norm {
                break;
            }
            x.iter_mut().for_each(|v| *v /= norm);
            cols.push(x);
        }
        if cols.len() == n {
            return Matrix::from_fn(n, n, |i, j| cols[j][i]);
        }
    }
}

/// Random `d x n` Parseval frame: the polar factor `(G G^T)^{-1/2} G` of a
/// Gaussian `G`, whose Gram matrix is uniform on the Grassmannian.
pub fn random_parseval<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Matrix {
    loop {
        let g = gaussian_matrix(d, n, rng);
        let spectrum = sym_eig(&g.outer_gram()).expect("Gram matrix is symmetric");
        if spectrum.lambda_min() <= 1e-6 * spectrum.lambda_max() {
            continue;
        }
        let inv_sqrt: Vec<f64> = spectrum.eigenvalues.iter().map(|l| 1.0 / l.sqrt()).collect();
        let whitening = spectrum.reconstruct_with(&inv_sqrt);
        return &whitening * &g;
    }
}

/// Gram matrix of a random Parseval frame, i.e. a random rank-`d` projection.
pub fn random_projection<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Matrix {
    random_parseval(d, n, rng).gram()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = gaussian_matrix(2, 2, &mut trial_rng(7, 3));
        let b = gaussian_matrix(2, 2, &mut trial_rng(7, 3));
        let c = gaussian_matrix(2, 2, &mut trial_rng(7, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn orthogonal_and_parseval_samples() {
        let mut rng = trial_rng(1, 0);
        let q = random_orthogonal(5, &mut rng);
        assert!((&q.gram() - &Matrix::identity(5)).frobenius_norm() < 1e-13);
        let f = random_parseval(3, 7, &mut rng);
        assert!((&f.outer_gram() - &Matrix::identity(3)).frobenius_norm() < 1e-12);
        let p = random_projection(6, 2, &mut rng);
        assert!((&(&p * &p) - &p).frobenius_norm() < 1e-12);
        assert!((p.trace() - 2.0).abs() < 1e-12);
    }
}
