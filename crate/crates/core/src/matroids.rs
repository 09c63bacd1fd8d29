//! Column matroids of real matrices and Gale duality.
//!
//! Elements are 0-indexed internally; the serialized form is 1-indexed.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::PsdMember;
use crate::linalg::{singular_values, Matrix};

/// Brute-force enumeration bound on the ground set.
pub const MAX_COLUMNS: usize = 16;

/// A matroid given by its bases, stored canonically: each basis strictly
/// increasing, the family sorted lexicographically without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matroid {
    ground_size: usize,
    bases: Vec<Vec<usize>>,
}

impl Matroid {
    /// Validates and canonicalizes a basis family, checking both basis axioms.
    pub fn new(ground_size: usize, bases: Vec<Vec<usize>>) -> Result<Self> {
        let family = canonical_family(ground_size, bases)?;
        if !check_basis_exchange(ground_size, &family)? {
            return Err(Error::NonMatroidFamily);
        }
        Ok(Self {
            ground_size,
            bases: family,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn rank(&self) -> usize {
        self.bases[0].len()
    }

    pub fn bases(&self) -> &[Vec<usize>] {
        &self.bases
    }

    pub fn is_basis(&self, subset: &[usize]) -> bool {
        self.bases.binary_search_by(|b| b.as_slice().cmp(subset)).is_ok()
    }

    /// `U(r, n)`: every `r`-subset is a basis.
    pub fn uniform(rank: usize, ground_size: usize) -> Result<Self> {
        Self::new(
            ground_size,
            (0..ground_size).combinations(rank).collect(),
        )
    }

    pub fn to_serialized(&self) -> SerializedMatroid {
        SerializedMatroid {
            ground_size: self.ground_size,
            bases: self
                .bases
                .iter()
                .map(|b| b.iter().map(|x| x + 1).collect())
                .collect(),
        }
    }
}

/// Wire form: ground size plus 1-indexed sorted bases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedMatroid {
    pub ground_size: usize,
    pub bases: Vec<Vec<usize>>,
}

impl TryFrom<SerializedMatroid> for Matroid {
    type Error = Error;

    fn try_from(s: SerializedMatroid) -> Result<Self> {
        let bases = s
            .bases
            .into_iter()
            .map(|b| {
                b.iter()
                    .map(|&x| {
                        x.checked_sub(1).ok_or_else(|| Error::InvalidSubset {
                            basis: b.clone(),
                            ground_size: s.ground_size,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matroid::new(s.ground_size, bases)
    }
}

fn canonical_family(ground_size: usize, bases: Vec<Vec<usize>>) -> Result<Vec<Vec<usize>>> {
    if bases.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let r = bases[0].len();
    if bases.iter().any(|b| b.len() != r) {
        return Err(Error::UnequalSizes);
    }
    for b in &bases {
        let increasing = b.windows(2).all(|w| w[0] < w[1]);
        if !increasing || b.last().is_some_and(|&x| x >= ground_size) {
            return Err(Error::InvalidSubset {
                basis: b.clone(),
                ground_size,
            });
        }
    }
    let set: BTreeSet<Vec<usize>> = bases.into_iter().collect();
    Ok(set.into_iter().collect())
}

/// Brute-force check of the basis exchange axiom: for all `A, B` in the family
/// and `a` in `A \ B` there is `b` in `B \ A` with `A - a + b` in the family.
///
/// Bases must be strictly increasing subsets of `0..ground_size`.
pub fn check_basis_exchange(ground_size: usize, bases: &[Vec<usize>]) -> Result<bool> {
    let family = canonical_family(ground_size, bases.to_vec())?;
    let members: BTreeSet<&[usize]> = family.iter().map(Vec::as_slice).collect();
    for a in &family {
        for b in &family {
            for &x in a.iter().filter(|x| !b.contains(x)) {
                let exchanged = b.iter().filter(|y| !a.contains(y)).any(|&y| {
                    let mut candidate: Vec<usize> =
                        a.iter().copied().filter(|&e| e != x).chain([y]).collect();
                    candidate.sort_unstable();
                    members.contains(candidate.as_slice())
                });
                if !exchanged {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Matroid represented by the columns of `a`.
///
/// A set of columns is independent when its smallest singular value exceeds
/// `tol * max(sigma_max(a), 1)`; the same global threshold fixes the rank.
pub fn matroid_from_columns(a: &Matrix, tol: f64) -> Result<Matroid> {
    let n = a.cols();
    if n > MAX_COLUMNS {
        return Err(Error::TooManyColumns {
            cols: n,
            max: MAX_COLUMNS,
        });
    }
    let sigma = singular_values(a)?;
    let threshold = tol * sigma[0].max(1.0);
    let rank = sigma.iter().filter(|&&s| s > threshold).count();
    if rank == 0 {
        return Err(Error::ZeroMatrix);
    }
    let mut bases = Vec::new();
    for subset in (0..n).combinations(rank) {
        let sub = a.select_columns(&subset);
        let smallest = *singular_values(&sub)?.last().expect("nonempty subset");
        if smallest > threshold {
            bases.push(subset);
        }
    }
    if bases.is_empty() {
        return Err(Error::NonMatroidFamily);
    }
    Matroid::new(n, bases)
}

/// Bases are the complements of the original bases.
pub fn gale_dual(m: &Matroid) -> Matroid {
    let mut bases: Vec<Vec<usize>> = m
        .bases
        .iter()
        .map(|b| (0..m.ground_size).filter(|x| !b.contains(x)).collect())
        .collect();
    bases.sort();
    Matroid {
        ground_size: m.ground_size,
        bases,
    }
}

/// Whether the column matroid of `b` is the Gale dual of that of `a`.
///
/// Only the column counts need to agree, so a frame and its complement
/// (`d x n` and `(n - d) x n`) can be compared as well as Gram matrices.
pub fn is_gale_pair(a: &impl AsRef<Matrix>, b: &impl AsRef<Matrix>, tol: f64) -> Result<bool> {
    let (a, b) = (a.as_ref(), b.as_ref());
    if a.cols() != b.cols() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    let ma = matroid_from_columns(a, tol)?;
    let mb = matroid_from_columns(b, tol)?;
    Ok(mb == gale_dual(&ma))
}

/// The column matroid of the kernel projection of `a` is the Gale dual of `a`'s.
pub fn verify_prop1(a: &PsdMember, tol: f64) -> Result<bool> {
    is_gale_pair(a, &a.kernel_projection(), tol)
}
