//! Dense two-phase simplex for small standard-form programs
//! `maximize c.x  subject to  A x = b, x >= 0`, pivoting by Bland's rule.

use crate::error::{Error, Result};
use crate::linalg::Matrix;

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;
const FEASIBILITY_TOL: f64 = 1e-9;
/// Relative residual below which an equality row counts as dependent.
const DEPENDENT_ROW_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct StandardFormLp {
    pub a: Matrix,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

struct Tableau {
    /// m rows of `[coefficients | rhs]`
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col];
        self.rows[row].iter_mut().for_each(|x| *x /= p);
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                r.iter_mut().zip(&pivot_row).for_each(|(x, p)| *x -= f * p);
                r[col] = 0.0;
            }
        }
        self.basis[row] = col;
    }

    /// Minimizes `cost . x` over the first `active` columns using Bland's rule.
    fn minimize(&mut self, cost: &[f64], active: usize, max_iter: usize) -> Result<Phase> {
        for _ in 0..max_iter {
            let entering = (0..active).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = cost[j]
                    - self
                        .basis
                        .iter()
                        .zip(&self.rows)
                        .map(|(&bi, r)| cost[bi] * r[j])
                        .sum::<f64>();
                reduced < -COST_TOL
            });
            let Some(col) = entering else {
                return Ok(Phase::Optimal);
            };
            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][col];
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((best, best_ratio)) => {
                        if ratio < best_ratio - 1e-14
                            || (ratio <= best_ratio + 1e-14 && self.basis[i] < self.basis[best])
                        {
                            Some((i, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            match leaving {
                None => return Ok(Phase::Unbounded),
                Some((row, _)) => self.pivot(row, col),
            }
        }
        Err(Error::LpNumericalFailure(format!(
            "simplex exceeded {max_iter} pivots"
        )))
    }
}

/// Indices of a maximal independent set of equality rows, or `None` when a
/// dependent row has an inconsistent right-hand side.
///
/// Redundant rows make the tableau degenerate and invite pivots on entries
/// that are zero up to rounding, so they are removed before the simplex.
fn independent_rows(lp: &StandardFormLp) -> Option<Vec<usize>> {
    let (m, k) = lp.a.shape();
    let scale = (0..m)
        .map(|i| lp.a.row(i).iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let b_scale = lp.b.iter().fold(1.0f64, |s, x| s.max(x.abs()));
    // Orthonormal basis of the kept rows, each with the matching combination of b.
    let mut basis: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut kept = Vec::new();
    for i in 0..m {
        let mut r = lp.a.row(i).to_vec();
        let mut rb = lp.b[i];
        for _ in 0..2 {
            for (q, qb) in &basis {
                let c: f64 = r.iter().zip(q).map(|(x, y)| x * y).sum();
                r.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                rb -= c * qb;
            }
        }
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= DEPENDENT_ROW_TOL * scale {
            if rb.abs() > FEASIBILITY_TOL * b_scale.max(scale) {
                return None;
            }
            continue;
        }
        debug_assert_eq!(r.len(), k);
        basis.push((r.iter().map(|x| x / norm).collect(), rb / norm));
        kept.push(i);
    }
    Some(kept)
}

pub fn solve(lp: &StandardFormLp) -> Result<LpOutcome> {
    let (m, k) = lp.a.shape();
    if lp.b.len() != m || lp.c.len() != k {
        return Err(Error::ShapeMismatch {
            left: (m, k),
            right: (lp.b.len(), lp.c.len()),
        });
    }
    let Some(kept) = independent_rows(lp) else {
        return Ok(LpOutcome::Infeasible);
    };
    let m = kept.len();
    let width = k + m;
    let rows = kept
        .iter()
        .enumerate()
        .map(|(slot, &i)| {
            let sign = if lp.b[i] < 0.0 { -1.0 } else { 1.0 };
            let mut r = vec![0.0; width + 1];
            for j in 0..k {
                r[j] = sign * lp.a[(i, j)];
            }
            r[k + slot] = 1.0;
            r[width] = sign * lp.b[i];
            r
        })
        .collect();
    let mut t = Tableau {
        rows,
        basis: (k..k + m).collect(),
        width,
    };
    let max_iter = 100 * (m + k).max(10);

    // phase one: minimize the sum of artificials
    let mut phase_one_cost = vec![0.0; width];
    phase_one_cost[k..].iter_mut().for_each(|c| *c = 1.0);
    if let Phase::Unbounded = t.minimize(&phase_one_cost, width, max_iter)? {
        return Err(Error::LpNumericalFailure("phase one reported unbounded".into()));
    }
    let infeasibility: f64 = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= k)
        .map(|(i, _)| t.rhs(i))
        .sum();
    let scale = lp.b.iter().fold(1.0f64, |s, x| s.max(x.abs()));
    if infeasibility > FEASIBILITY_TOL * scale {
        return Ok(LpOutcome::Infeasible);
    }

    // drive artificials out of the basis; rows that cannot be pivoted are redundant
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= k {
            match (0..k).find(|&j| t.rows[i][j].abs() > 1e-9) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut phase_two_cost: Vec<f64> = lp.c.iter().map(|c| -c).collect();
    phase_two_cost.resize(width, 0.0);
    match t.minimize(&phase_two_cost, k, max_iter)? {
        Phase::Unbounded => Ok(LpOutcome::Unbounded),
        Phase::Optimal => {
            let mut x = vec![0.0; k];
            for (i, &b) in t.basis.iter().enumerate() {
                x[b] = t.rhs(i).max(0.0);
            }
            let objective = x.iter().zip(&lp.c).map(|(x, c)| x * c).sum();
            Ok(LpOutcome::Optimal { x, objective })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(a: &[&[f64]], b: &[f64], c: &[f64]) -> StandardFormLp {
        StandardFormLp {
            a: Matrix::from_rows(a).unwrap(),
            b: b.to_vec(),
            c: c.to_vec(),
        }
    }

    #[test]
    fn small_optimum() {
        // max x0 + x1 s.t. x0 + 2 x1 + s0 = 4, 3 x0 + x1 + s1 = 6
        let p = lp(
            &[&[1.0, 2.0, 1.0, 0.0], &[3.0, 1.0, 0.0, 1.0]],
            &[4.0, 6.0],
            &[1.0, 1.0, 0.0, 0.0],
        );
        let LpOutcome::Optimal { x, objective } = solve(&p).unwrap() else {
            panic!("expected optimum");
        };
        assert!((x[0] - 1.6).abs() < 1e-12 && (x[1] - 1.2).abs() < 1e-12);
        assert!((objective - 2.8).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let p = lp(&[&[1.0, 1.0]], &[-1.0], &[1.0, 0.0]);
        assert_eq!(solve(&p).unwrap(), LpOutcome::Infeasible);
        let p = lp(&[&[1.0, -1.0]], &[1.0], &[1.0, 0.0]);
        assert_eq!(solve(&p).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let p = lp(&[&[1.0, 1.0], &[2.0, 2.0]], &[1.0, 2.0], &[1.0, 0.0]);
        let LpOutcome::Optimal { x, .. } = solve(&p).unwrap() else {
            panic!("expected optimum");
        };
        assert!((x[0] - 1.0).abs() < 1e-12 && x[1].abs() < 1e-12);
    }

    #[test]
    fn inconsistent_dependent_row_is_infeasible() {
        let p = lp(&[&[1.0, 1.0], &[2.0, 2.0]], &[1.0, 3.0], &[1.0, 0.0]);
        assert_eq!(solve(&p).unwrap(), LpOutcome::Infeasible);
    }
}
