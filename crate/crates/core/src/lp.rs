//! Dense exact simplex for small linear programs in standard form.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::Rational;

/// Solution of `min cᵀx` subject to `Ax = b`, `x ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    pub objective: Rational,
}

/// Minimises `cᵀx` over `Ax = b, x ≥ 0` starting from a feasible basis
/// whose columns form an identity in `A` (so `b ≥ 0` is required).
/// Bland's rule keeps the pivoting finite.
pub fn minimize(
    a: &[Vec<Rational>],
    b: &[Rational],
    c: &[Rational],
    basis: &[usize],
) -> Result<LpSolution> {
    let rows = a.len();
    let cols = c.len();
    if b.len() != rows || basis.len() != rows || a.iter().any(|r| r.len() != cols) {
        return Err(Error::Validation {
            field: "lp".into(),
            message: "inconsistent dimensions".into(),
        });
    }
    if b.iter().any(|x| x.is_negative()) {
        return Err(Error::Validation {
            field: "lp".into(),
            message: "initial basis infeasible".into(),
        });
    }
    let mut tab: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut basis = basis.to_vec();

    loop {
        // reduced costs c_j - c_Bᵀ B⁻¹ A_j, read off the tableau
        let entering = (0..cols).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut reduced = c[j].clone();
            for (r, &bj) in basis.iter().enumerate() {
                if !tab[r][j].is_zero() {
                    reduced -= &c[bj] * &tab[r][j];
                }
            }
            reduced.is_negative()
        });
        let Some(e) = entering else { break };

        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..rows {
            if tab[r][e].is_positive() {
                let ratio = &tab[r][cols] / &tab[r][e];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            return Err(Error::Validation {
                field: "lp".into(),
                message: "unbounded".into(),
            });
        };

        let pivot = tab[pr][e].clone();
        for v in tab[pr].iter_mut() {
            *v /= &pivot;
        }
        let pivot_row = tab[pr].clone();
        for (r, row) in tab.iter_mut().enumerate() {
            if r == pr || row[e].is_zero() {
                continue;
            }
            let factor = row[e].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        basis[pr] = e;
    }

    let mut x = vec![Rational::zero(); cols];
    for (r, &bj) in basis.iter().enumerate() {
        x[bj] = tab[r][cols].clone();
    }
    let objective = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    Ok(LpSolution { x, objective })
}
