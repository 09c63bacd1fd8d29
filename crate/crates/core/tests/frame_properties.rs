use naimark::frames::{
    frame_bounds, gram, naimark_complement_parseval, naimark_gram, scalable_extension,
    scalable_extension_with, synthesize, Frame, ProjectionMember,
};
use naimark::sampling::{gaussian_matrix, random_orthogonal, random_parseval, trial_rng};
use naimark::{Matrix, DEFAULT_TOL};
use proptest::prelude::*;
use rand::Rng;

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=8).prop_flat_map(|n| (1..n, Just(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complement_gram_is_identity_minus_gram((d, n) in shape(), seed in any::<u64>()) {
        let f = Frame::new(random_parseval(d, n, &mut trial_rng(seed, 0)), DEFAULT_TOL).unwrap();
        let g = naimark_complement_parseval(&f, DEFAULT_TOL).unwrap();
        prop_assert_eq!(g.d(), n - d);
        prop_assert!(g.is_parseval(1e-9));
        let expected = &Matrix::identity(n) - &f.gram_matrix();
        prop_assert!((&g.gram_matrix() - &expected).frobenius_norm() <= 1e-9);
    }

    #[test]
    fn naimark_gram_is_an_exact_involution((d, n) in shape(), seed in any::<u64>()) {
        let f = random_parseval(d, n, &mut trial_rng(seed, 1));
        let p = ProjectionMember::new(f.gram()).unwrap();
        let q = naimark_gram(&p);
        prop_assert_eq!(q.rank(), n - d);
        prop_assert_eq!(naimark_gram(&q), p);
    }

    #[test]
    fn gram_is_invariant_under_left_orthogonal_action((d, n) in shape(), seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 2);
        let f = gaussian_matrix(d, n, &mut rng);
        let q = random_orthogonal(d, &mut rng);
        let qf = &q * &f;
        prop_assert!((&qf.gram() - &f.gram()).frobenius_norm() <= 1e-10 * f.gram().frobenius_norm().max(1.0));
    }

    #[test]
    fn synthesize_round_trips((d, n) in shape(), seed in any::<u64>()) {
        let f = Frame::new(gaussian_matrix(d, n, &mut trial_rng(seed, 3)), DEFAULT_TOL).unwrap();
        let g = gram(&f, DEFAULT_TOL).unwrap();
        let h = synthesize(&g, DEFAULT_TOL).unwrap();
        prop_assert_eq!(h.d(), d);
        let back = gram(&h, DEFAULT_TOL).unwrap();
        prop_assert!((back.matrix() - g.matrix()).frobenius_norm() <= 1e-9);
    }

    #[test]
    fn frame_bounds_scale_quadratically((d, n) in shape(), seed in any::<u64>(), t in 0.1f64..10.0) {
        let f = gaussian_matrix(d, n, &mut trial_rng(seed, 4));
        let b = frame_bounds(&f, DEFAULT_TOL).unwrap();
        let bt = frame_bounds(&f.scale(t), DEFAULT_TOL).unwrap();
        prop_assert!((bt.lower - t * t * b.lower).abs() <= 1e-10 * (t * t * b.upper).max(1.0));
        prop_assert!((bt.upper - t * t * b.upper).abs() <= 1e-10 * (t * t * b.upper).max(1.0));
    }

    #[test]
    fn double_scalable_extension_recovers_gram((d, n) in shape(), seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 5);
        let parseval = random_parseval(d, n, &mut rng);
        let c: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
        let unscaled = parseval.scale_columns(&c.iter().map(|c| 1.0 / c).collect::<Vec<_>>());
        let f = Frame::new(unscaled, DEFAULT_TOL).unwrap();
        let once = scalable_extension(&f, DEFAULT_TOL).unwrap();
        let twice = scalable_extension_with(&once.frame, &once.scalars, DEFAULT_TOL).unwrap();
        prop_assert!((&twice.frame.gram_matrix() - &f.gram_matrix()).frobenius_norm() <= 1e-8);
    }
}

#[test]
fn unscaled_parseval_frames_with_one_extra_vector_are_scalable() {
    // n = d + 1 leaves the scalars nearly unique, with many redundant equalities.
    for n in 3..=8 {
        for seed in 0..200 {
            let mut rng = trial_rng(seed, n as u64);
            let parseval = random_parseval(n - 1, n, &mut rng);
            let c: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
            let f = Frame::new(parseval.scale_columns(&c), DEFAULT_TOL).unwrap();
            let sol = naimark::scalability_solve(&f).unwrap();
            let sol = sol.solution().expect("scalable by construction");
            for (s, c) in sol.scalars.iter().zip(&c) {
                assert!((s * c - 1.0).abs() < 1e-6, "seed {seed} n {n}");
            }
        }
    }
}
