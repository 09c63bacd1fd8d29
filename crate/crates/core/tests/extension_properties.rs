use naimark::extensions::{
    davis_kahan_check, kernel_extension, random_projection_member, random_psd_member,
    same_stratum_pair, spectral_shift,
};
use naimark::frames::naimark_gram;
use naimark::sampling::trial_rng;
use naimark::{Matrix, ProjectionMember, DEFAULT_TOL};
use proptest::prelude::*;
use rand::Rng;

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=8).prop_flat_map(|n| (1..n, Just(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn both_maps_extend_the_complement((d, n) in shape(), seed in any::<u64>()) {
        let p = random_projection_member(n, d, &mut trial_rng(seed, 0));
        let complement = naimark_gram(&p);
        let psd = p.to_psd(DEFAULT_TOL).unwrap();
        let s = spectral_shift(&psd, DEFAULT_TOL).unwrap();
        let k = kernel_extension(&psd).unwrap();
        prop_assert!((s.matrix() - complement.matrix()).frobenius_norm() <= 1e-9);
        prop_assert!((k.matrix() - complement.matrix()).frobenius_norm() <= 1e-9);
    }

    #[test]
    fn spectral_shift_is_an_involution((d, n) in shape(), seed in any::<u64>()) {
        let (_, a) = random_psd_member(n, d, &mut trial_rng(seed, 1), DEFAULT_TOL);
        let e = spectral_shift(&a, DEFAULT_TOL).unwrap();
        prop_assert!((e.lambda_max() - a.lambda_max()).abs() <= 1e-9);
        let ee = spectral_shift(&e, DEFAULT_TOL).unwrap();
        prop_assert!((ee.matrix() - a.matrix()).frobenius_norm() <= 1e-9);
    }

    #[test]
    fn double_kernel_is_range_projection((d, n) in shape(), seed in any::<u64>()) {
        let (_, a) = random_psd_member(n, d, &mut trial_rng(seed, 2), DEFAULT_TOL);
        let k = kernel_extension(&a).unwrap();
        prop_assert_eq!(k.rank(), n - a.rank());
        let kk = kernel_extension(&k.to_psd(DEFAULT_TOL).unwrap()).unwrap();
        prop_assert!((kk.matrix() - &a.range_projection()).frobenius_norm() <= 1e-9);
        // generic Gaussian Grams are never projections, so the double kernel differs
        prop_assert!(ProjectionMember::new(a.matrix().clone()).is_err());
        prop_assert!((kk.matrix() - a.matrix()).frobenius_norm() > 1e-6);
    }

    #[test]
    fn double_kernel_fixes_projections((d, n) in shape(), seed in any::<u64>()) {
        let p = random_projection_member(n, d, &mut trial_rng(seed, 3));
        let psd = p.to_psd(DEFAULT_TOL).unwrap();
        let kk = kernel_extension(&kernel_extension(&psd).unwrap().to_psd(DEFAULT_TOL).unwrap()).unwrap();
        prop_assert!((kk.matrix() - p.matrix()).frobenius_norm() <= 1e-9);
    }

    #[test]
    fn davis_kahan_delta_epsilon((d, n) in shape(), seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 4);
        let (a, b) = same_stratum_pair(n, d, &mut rng, DEFAULT_TOL);
        let dk = davis_kahan_check(&a, &b).unwrap();
        prop_assert!(dk.holds && dk.sine_identity_holds);
        // any epsilon with ||A - B|| < lambda * eps / sqrt(2) must give lhs < eps
        let lambda = a.smallest_positive_eigenvalue();
        let dist = (a.matrix() - b.matrix()).frobenius_norm();
        let eps = std::f64::consts::SQRT_2 * dist / lambda * rng.random_range(1.0001..3.0);
        prop_assert!(dist < lambda * eps / std::f64::consts::SQRT_2);
        prop_assert!(dk.lhs < eps);
    }
}

#[test]
fn shifted_identity_scaled_projection_is_gale_at_n_two() {
    // S(2) is made of positive multiples of rank-one projections
    let t = 0.4f64;
    let q = Matrix::from_rows(&[[t.cos()], [t.sin()]]).unwrap();
    let a = naimark::PsdMember::new(q.transpose().gram().scale(3.0), DEFAULT_TOL).unwrap();
    let e = spectral_shift(&a, DEFAULT_TOL).unwrap();
    assert!(naimark::is_gale_pair(&a, &e, DEFAULT_TOL).unwrap());
}
