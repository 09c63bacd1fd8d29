//! Candidate extensions of the Naimark complement from projections to all of
//! the PSD set, and the harness that checks them against continuity,
//! involutivity and Gale duality.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{PsdMember, ProjectionMember};
use crate::linalg::{frobenius_distance, principal_angle_sines, Matrix};
use crate::matroids::is_gale_pair;
use crate::sampling::{gaussian_matrix, random_orthogonal, random_projection, trial_rng, RNG_ALGORITHM};

/// Residual tolerance for numerical property checks in [`check_property`].
pub const CHECK_TOL: f64 = 1e-8;
/// Slack allowed on the right-hand side of the Davis-Kahan bound.
pub const DK_SLACK: f64 = 1e-9;
/// Accepted gap between `||E(A) - E(B)||_F` and `sqrt(2) ||sin Theta||_F`.
pub const SINE_IDENTITY_TOL: f64 = 1e-8;
/// An eigenvalue this far from both 0 and 1 marks a matrix as a non-projection.
pub const NON_PROJECTION_GAP: f64 = 1e-6;
/// Positive eigenvalues differing by more than this (relative) count as distinct.
pub const DISTINCT_EIGENVALUE_GAP: f64 = 1e-6;
/// Upper limit on `n` for Gale checks, which enumerate matroids.
pub const MAX_GALE_N: usize = 10;

/// `lambda_max(A) I - A`.
pub fn spectral_shift(a: &PsdMember, tol: f64) -> Result<PsdMember> {
    let n = a.n();
    let shifted = &Matrix::identity(n).scale(a.lambda_max()) - a.matrix();
    PsdMember::new(shifted, tol)
}

/// Orthogonal projection onto the kernel.
pub fn kernel_extension(a: &PsdMember) -> Result<ProjectionMember> {
    ProjectionMember::new(a.kernel_projection())
}

/// The involutive Gale extension exists only through a cardinality argument; on
/// projections it is `I - P`, elsewhere there is nothing to compute.
pub fn bijective_gale_extension(a: &PsdMember) -> Result<PsdMember> {
    match ProjectionMember::new(a.matrix().clone()) {
        Ok(p) => {
            let q = crate::frames::naimark_gram(&p);
            PsdMember::new(q.into_matrix(), crate::linalg::DEFAULT_TOL)
        }
        Err(_) => Err(Error::NotConstructive),
    }
}

/// `Q diag(d, d-1, ..., 1, 0, ..., 0) Q^T` with `Q` Haar-random orthogonal.
///
/// Its positive eigenvalues are distinct, so the spectral shift has rank
/// `n - 1 > n - d` and cannot be Gale dual to it.
pub fn gale_failure_witness<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R, tol: f64) -> Result<PsdMember> {
    if n < 3 || d < 2 || d >= n {
        return Err(Error::InvalidShape {
            n,
            d,
            reason: "need n >= 3 and 2 <= d <= n - 1 for two distinct positive eigenvalues".into(),
        });
    }
    let mut diag = vec![0.0; n];
    for (i, x) in diag.iter_mut().take(d).enumerate() {
        *x = (d - i) as f64;
    }
    let q = random_orthogonal(n, rng);
    let a = &(&q * &Matrix::from_diag(&diag)) * &q.transpose();
    PsdMember::new(a, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DavisKahanCheck {
    /// `||E(A) - E(B)||_F` for the kernel extension `E`
    pub lhs: f64,
    /// `sqrt(2) ||A - B||_F / lambda_d(A)`
    pub rhs: f64,
    pub holds: bool,
    /// `||sin Theta||_F` between the two kernels
    pub sin_theta: f64,
    /// `|lhs - sqrt(2) ||sin Theta||_F| <= SINE_IDENTITY_TOL`
    pub sine_identity_holds: bool,
}

/// Davis-Kahan bound for the kernel extension on one stratum.
pub fn davis_kahan_check(a: &PsdMember, b: &PsdMember) -> Result<DavisKahanCheck> {
    if a.rank() != b.rank() || a.n() != b.n() {
        return Err(Error::RankMismatch {
            left: a.rank(),
            right: b.rank(),
        });
    }
    let lambda = a.smallest_positive_eigenvalue();
    let lhs = frobenius_distance(&a.kernel_projection(), &b.kernel_projection())?;
    let rhs = std::f64::consts::SQRT_2 * frobenius_distance(a.matrix(), b.matrix())? / lambda;
    let sines = principal_angle_sines(&a.kernel_basis(), &b.kernel_basis())?;
    let sin_theta = sines.iter().map(|s| s * s).sum::<f64>().sqrt();
    Ok(DavisKahanCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + DK_SLACK,
        sin_theta,
        sine_identity_holds: (lhs - std::f64::consts::SQRT_2 * sin_theta).abs() <= SINE_IDENTITY_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

/// Dimension of the rank-`d` stratum of `n x n` PSD matrices, as a real manifold.
pub fn stratum_dimension(d: usize, n: usize, field: Field) -> Result<usize> {
    if d == 0 || d >= n {
        return Err(Error::OutOfRange(format!(
            "stratum rank {d} must lie in 1..={}",
            n.saturating_sub(1)
        )));
    }
    Ok(match field {
        Field::Real => d * n - d * (d - 1) / 2,
        Field::Complex => 2 * d * n - d * d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Spectral,
    Kernel,
}

impl MapKind {
    pub fn apply(self, a: &PsdMember, tol: f64) -> Result<PsdMember> {
        match self {
            MapKind::Spectral => spectral_shift(a, tol),
            MapKind::Kernel => kernel_extension(a)?.to_psd(tol),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MapKind::Spectral => "spectral",
            MapKind::Kernel => "kernel",
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(MapKind::Spectral),
            "kernel" => Ok(MapKind::Kernel),
            other => Err(Error::UnknownMap(other.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    #[serde(rename = "extends_N")]
    ExtendsN,
    #[serde(rename = "involutive")]
    Involutive,
    #[serde(rename = "gale")]
    Gale,
    #[serde(rename = "dk_bound")]
    DkBound,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::ExtendsN => "extends_N",
            Property::Involutive => "involutive",
            Property::Gale => "gale",
            Property::DkBound => "dk_bound",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "extends_N" | "extends_n" | "extends-n" => Ok(Property::ExtendsN),
            "involutive" => Ok(Property::Involutive),
            "gale" => Ok(Property::Gale),
            "dk_bound" | "dk-bound" => Ok(Property::DkBound),
            other => Err(Error::UnknownProperty(other.into())),
        }
    }
}

/// How trial ranks are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    /// Rank `1 + (trial mod (n - 1))`, sweeping every stratum.
    #[default]
    Stratified,
    /// Rank `2 + (trial mod (n - 2))`: generic samples with two or more distinct
    /// positive eigenvalues. Needs `n >= 3`.
    MultiEigenvalue,
}

impl FromStr for Sampler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stratified" => Ok(Sampler::Stratified),
            "multi" | "multi_eigenvalue" | "multi-eigenvalue" => Ok(Sampler::MultiEigenvalue),
            other => Err(Error::OutOfRange(format!("unknown sampler {other:?}"))),
        }
    }
}

impl Sampler {
    fn rank(self, n: usize, trial: usize) -> usize {
        match self {
            Sampler::Stratified => 1 + trial % (n - 1),
            Sampler::MultiEigenvalue => 2 + trial % (n - 2),
        }
    }
}

/// Random rank-`d` member `F^T F` with `F` a `d x n` standard Gaussian; `F` is returned too.
pub fn random_psd_member<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R, tol: f64) -> (Matrix, PsdMember) {
    loop {
        let f = gaussian_matrix(d, n, rng);
        if let Ok(a) = PsdMember::new(f.gram(), tol) {
            if a.rank() == d {
                return (f, a);
            }
        }
    }
}

pub fn random_projection_member<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> ProjectionMember {
    loop {
        if let Ok(p) = ProjectionMember::new(random_projection(n, d, rng)) {
            return p;
        }
    }
}

/// Same-stratum neighbour of `F^T F`: perturb the factor to `F + eta Delta` with
/// `eta = 0.1 sqrt(lambda_d) u`, `u` uniform in `(0, 1]`.
pub fn same_stratum_pair<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R, tol: f64) -> (PsdMember, PsdMember) {
    loop {
        let (f, a) = random_psd_member(n, d, rng, tol);
        let u: f64 = 1.0 - rng.random::<f64>();
        let eta = 0.1 * a.smallest_positive_eigenvalue().sqrt() * u;
        let delta = gaussian_matrix(d, n, rng);
        let g = &f + &delta.scale(eta);
        if let Ok(b) = PsdMember::new(g.gram(), tol) {
            if b.rank() == d {
                return (a, b);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub map: MapKind,
    pub property: Property,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub sampler: Sampler,
    pub tol: f64,
}

impl CheckConfig {
    pub fn new(map: MapKind, property: Property, n: usize, trials: usize, seed: u64) -> Self {
        Self {
            map,
            property,
            n,
            trials,
            seed,
            sampler: Sampler::Stratified,
            tol: crate::linalg::DEFAULT_TOL,
        }
    }

    pub fn with_sampler(mut self, sampler: Sampler) -> Self {
        self.sampler = sampler;
        self
    }
}

/// First failing trial: the sampled input and the map's output (or, for
/// `dk_bound`, the second member of the pair).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub input: Matrix,
    pub output: Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub map: MapKind,
    pub property: Property,
    pub n: usize,
    pub seed: u64,
    pub sampler: Sampler,
    pub rng: String,
    pub trials: usize,
    pub failures: usize,
    /// Failures predicted trial-by-trial from the sample's spectrum.
    pub predicted_failures: usize,
    /// Trials whose outcome disagreed with the prediction.
    pub mismatches: usize,
    pub worst_residual: f64,
    pub witness: Option<Witness>,
}

impl ExtensionReport {
    pub fn matches_prediction(&self) -> bool {
        self.mismatches == 0
    }
}

struct TrialOutcome {
    failed: bool,
    predicted_failure: bool,
    residual: f64,
    input: Matrix,
    output: Matrix,
}

fn is_non_projection(a: &PsdMember) -> bool {
    a.spectrum()
        .eigenvalues
        .iter()
        .any(|&l| l.abs().min((l - 1.0).abs()) > NON_PROJECTION_GAP)
}

fn run_trial(cfg: &CheckConfig, trial: usize) -> Result<TrialOutcome> {
    let n = cfg.n;
    let tol = cfg.tol;
    let d = cfg.sampler.rank(n, trial);
    let mut rng = trial_rng(cfg.seed, trial as u64);
    match cfg.property {
        Property::ExtendsN => {
            let p = random_projection_member(n, d, &mut rng);
            let image = cfg.map.apply(&p.to_psd(tol)?, tol)?;
            let complement = crate::frames::naimark_gram(&p);
            let residual = frobenius_distance(image.matrix(), complement.matrix())?;
            Ok(TrialOutcome {
                failed: residual > CHECK_TOL,
                predicted_failure: false,
                residual,
                input: p.into_matrix(),
                output: image.matrix().clone(),
            })
        }
        Property::Involutive => {
            let (_, a) = random_psd_member(n, d, &mut rng, tol);
            let image = cfg.map.apply(&a, tol)?;
            let twice = cfg.map.apply(&image, tol)?;
            let residual = frobenius_distance(twice.matrix(), a.matrix())?;
            let predicted_failure = match cfg.map {
                MapKind::Spectral => false,
                MapKind::Kernel => is_non_projection(&a),
            };
            Ok(TrialOutcome {
                failed: residual > CHECK_TOL,
                predicted_failure,
                residual,
                input: a.matrix().clone(),
                output: twice.matrix().clone(),
            })
        }
        Property::Gale => {
            let (_, a) = random_psd_member(n, d, &mut rng, tol);
            let image = cfg.map.apply(&a, tol)?;
            let gale = is_gale_pair(&a, &image, tol)?;
            let residual = (image.rank() as f64 - (n - a.rank()) as f64).abs();
            let predicted_failure = match cfg.map {
                MapKind::Spectral => a.has_distinct_positive_eigenvalues(DISTINCT_EIGENVALUE_GAP),
                MapKind::Kernel => false,
            };
            Ok(TrialOutcome {
                failed: !gale,
                predicted_failure,
                residual,
                input: a.matrix().clone(),
                output: image.matrix().clone(),
            })
        }
        Property::DkBound => {
            if cfg.map != MapKind::Kernel {
                return Err(Error::UnsupportedCheck {
                    map: cfg.map.to_string(),
                    property: cfg.property.to_string(),
                });
            }
            let (a, b) = same_stratum_pair(n, d, &mut rng, tol);
            let dk = davis_kahan_check(&a, &b)?;
            Ok(TrialOutcome {
                failed: !(dk.holds && dk.sine_identity_holds),
                predicted_failure: false,
                residual: dk.lhs - dk.rhs,
                input: a.matrix().clone(),
                output: b.matrix().clone(),
            })
        }
    }
}

/// Samples `trials` members and records how often `map` violates `property`.
///
/// Trial `i` draws from the stream `(seed, i)`, so a report is a pure function
/// of its configuration.
pub fn check_property(cfg: &CheckConfig) -> Result<ExtensionReport> {
    if cfg.n < 2 {
        return Err(Error::OutOfRange(format!("n = {} must be at least 2", cfg.n)));
    }
    if cfg.sampler == Sampler::MultiEigenvalue && cfg.n < 3 {
        return Err(Error::OutOfRange(
            "the multi-eigenvalue sampler needs n >= 3".into(),
        ));
    }
    if cfg.property == Property::Gale && cfg.n > MAX_GALE_N {
        return Err(Error::OutOfRange(format!(
            "gale checks enumerate matroids and need n <= {MAX_GALE_N}"
        )));
    }
    if cfg.property == Property::DkBound && cfg.map != MapKind::Kernel {
        return Err(Error::UnsupportedCheck {
            map: cfg.map.to_string(),
            property: cfg.property.to_string(),
        });
    }

    let mut report = ExtensionReport {
        map: cfg.map,
        property: cfg.property,
        n: cfg.n,
        seed: cfg.seed,
        sampler: cfg.sampler,
        rng: RNG_ALGORITHM.to_string(),
        trials: cfg.trials,
        failures: 0,
        predicted_failures: 0,
        mismatches: 0,
        worst_residual: 0.0,
        witness: None,
    };
    for trial in 0..cfg.trials {
        let outcome = run_trial(cfg, trial)?;
        report.worst_residual = report.worst_residual.max(outcome.residual);
        report.predicted_failures += usize::from(outcome.predicted_failure);
        report.mismatches += usize::from(outcome.failed != outcome.predicted_failure);
        if outcome.failed {
            report.failures += 1;
            if report.witness.is_none() {
                report.witness = Some(Witness {
                    trial,
                    input: outcome.input,
                    output: outcome.output,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn psd(diag: &[f64]) -> PsdMember {
        PsdMember::new(Matrix::from_diag(diag), TOL).unwrap()
    }

    #[test]
    fn spectral_shift_examples() {
        assert_eq!(
            spectral_shift(&psd(&[2.0, 1.0, 0.0]), TOL).unwrap().matrix(),
            &Matrix::from_diag(&[0.0, 1.0, 2.0])
        );
        assert_eq!(
            spectral_shift(&psd(&[1.0, 0.0]), TOL).unwrap().matrix(),
            &Matrix::from_diag(&[0.0, 1.0])
        );
        let a = psd(&[3.0, 1.0, 0.0]);
        let twice = spectral_shift(&spectral_shift(&a, TOL).unwrap(), TOL).unwrap();
        assert_eq!(twice.matrix(), a.matrix());
    }

    #[test]
    fn kernel_extension_examples() {
        let a = psd(&[2.0, 0.0]);
        let k = kernel_extension(&a).unwrap();
        assert_eq!(k.matrix(), &Matrix::from_diag(&[0.0, 1.0]));
        let kk = kernel_extension(&k.to_psd(TOL).unwrap()).unwrap();
        assert_eq!(kk.matrix(), &Matrix::from_diag(&[1.0, 0.0]));
        assert_ne!(kk.matrix(), a.matrix());

        let mb = Matrix::from_fn(3, 3, |i, j| if i == j { 2.0 / 3.0 } else { -1.0 / 3.0 });
        let k = kernel_extension(&PsdMember::new(mb, TOL).unwrap()).unwrap();
        let third = Matrix::from_fn(3, 3, |_, _| 1.0 / 3.0);
        assert!(frobenius_distance(k.matrix(), &third).unwrap() < 1e-14);
    }

    #[test]
    fn gale_failure_witness_examples() {
        let mut rng = trial_rng(0, 0);
        let w = gale_failure_witness(3, 2, &mut rng, TOL).unwrap();
        let e = spectral_shift(&w, TOL).unwrap();
        assert_eq!((w.rank(), e.rank()), (2, 2));
        assert!(!is_gale_pair(&w, &e, TOL).unwrap());

        let w = gale_failure_witness(4, 2, &mut rng, TOL).unwrap();
        let e = spectral_shift(&w, TOL).unwrap();
        assert_eq!(e.rank(), 3);
        for (l, want) in e.spectrum().eigenvalues.iter().zip([2.0, 2.0, 1.0, 0.0]) {
            assert!((l - want).abs() < 1e-12);
        }

        assert!(matches!(
            gale_failure_witness(3, 1, &mut rng, TOL),
            Err(Error::InvalidShape { .. })
        ));
    }

    #[test]
    fn davis_kahan_examples() {
        let a = psd(&[2.0, 0.0]);
        let same = davis_kahan_check(&a, &a).unwrap();
        assert_eq!((same.lhs, same.rhs, same.holds), (0.0, 0.0, true));

        let t = 30f64.to_radians();
        let (c, s) = (t.cos(), t.sin());
        let b = PsdMember::new(
            Matrix::from_rows(&[[2.0 * c * c, 2.0 * c * s], [2.0 * c * s, 2.0 * s * s]]).unwrap(),
            TOL,
        )
        .unwrap();
        let dk = davis_kahan_check(&a, &b).unwrap();
        assert!((dk.lhs - 2f64.sqrt() * 0.5).abs() < 1e-14);
        assert!((dk.rhs - 1.0).abs() < 1e-14);
        assert!(dk.holds && dk.sine_identity_holds);
        assert!((dk.sin_theta - 0.5).abs() < 1e-14);

        assert!(matches!(
            davis_kahan_check(&psd(&[1.0, 1.0, 0.0]), &psd(&[1.0, 0.0, 0.0])),
            Err(Error::RankMismatch { left: 2, right: 1 })
        ));
    }

    #[test]
    fn stratum_dimension_examples() {
        for n in 2..12 {
            assert_eq!(stratum_dimension(1, n, Field::Real).unwrap(), n);
            let top = stratum_dimension(n - 1, n, Field::Real).unwrap();
            assert_eq!(top, n * (n - 1) - (n - 1) * (n - 2) / 2);
            if n >= 3 {
                assert!(top > n);
            }
        }
        assert_eq!(stratum_dimension(1, 2, Field::Real).unwrap(), 2);
        assert_eq!(stratum_dimension(2, 3, Field::Complex).unwrap(), 8);
        assert!(stratum_dimension(0, 3, Field::Real).is_err());
        assert!(stratum_dimension(3, 3, Field::Real).is_err());
    }

    #[test]
    fn case_three_is_not_constructive() {
        assert_eq!(bijective_gale_extension(&psd(&[2.0, 0.0])), Err(Error::NotConstructive));
        let p = bijective_gale_extension(&psd(&[1.0, 0.0])).unwrap();
        assert_eq!(p.matrix(), &Matrix::from_diag(&[0.0, 1.0]));
    }

    #[test]
    fn check_property_examples() {
        let r = check_property(&CheckConfig::new(MapKind::Spectral, Property::Involutive, 5, 200, 0)).unwrap();
        assert_eq!(r.failures, 0);
        assert!(r.witness.is_none());

        let r = check_property(&CheckConfig::new(MapKind::Kernel, Property::Gale, 6, 100, 0)).unwrap();
        assert_eq!(r.failures, 0);

        let r = check_property(
            &CheckConfig::new(MapKind::Spectral, Property::Gale, 3, 100, 0)
                .with_sampler(Sampler::MultiEigenvalue),
        )
        .unwrap();
        assert_eq!(r.failures, 100);
        assert!(r.witness.is_some());
        assert!(r.matches_prediction());
    }

    #[test]
    fn check_property_rejects_bad_requests() {
        assert!(matches!(
            check_property(&CheckConfig::new(MapKind::Spectral, Property::DkBound, 3, 1, 0)),
            Err(Error::UnsupportedCheck { .. })
        ));
        assert!(check_property(&CheckConfig::new(MapKind::Kernel, Property::Gale, 11, 1, 0)).is_err());
        assert_eq!("nope".parse::<MapKind>(), Err(Error::UnknownMap("nope".into())));
        assert_eq!("nope".parse::<Property>(), Err(Error::UnknownProperty("nope".into())));
    }
}
