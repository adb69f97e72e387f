//! A small dense simplex solver over exact rationals.
//!
//! Solves `max c·y` subject to `A y ≤ rhs`, `y ≥ 0` with `rhs ≥ 0`, so the slack basis is a
//! feasible start. Bland's rule rules out cycling. The optimal dual prices are returned
//! alongside the primal optimum, which lets callers certify the result independently.

use crate::rational::StrictSign;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    /// Optimal `y`.
    pub primal: Vec<Rational>,
    /// Optimal prices of the `≤` rows, a solution of the dual `min rhs·x, Aᵀx ≥ c, x ≥ 0`.
    pub dual: Vec<Rational>,
}

/// `a` is row-major with one row per constraint.
pub fn maximize(a: &[Vec<Rational>], rhs: &[Rational], c: &[Rational]) -> LpOutcome {
    let rows = a.len();
    let cols = c.len();
    assert_eq!(rhs.len(), rows);
    assert!(a.iter().all(|r| r.len() == cols));
    assert!(rhs.iter().all(|v| !v.is_negative()), "slack basis must be feasible");

    let width = cols + rows;
    // tableau[i] = [A | I | rhs]
    let mut tab: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut t = row.clone();
            t.extend((0..rows).map(|j| if i == j { Rational::ONE } else { Rational::ZERO }));
            t.push(rhs[i].clone());
            t
        })
        .collect();
    // Reduced costs c_j - z_j, and -objective in the last slot.
    let mut reduced: Vec<Rational> = c.to_vec();
    reduced.extend((0..=rows).map(|_| Rational::ZERO));
    let mut basis: Vec<usize> = (cols..width).collect();

    loop {
        let Some(enter) = (0..width).find(|&j| reduced[j].is_positive()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        pivot(&mut tab, &mut reduced, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    let mut primal = vec![Rational::ZERO; cols];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < cols {
            primal[bv] = tab[i][width].clone();
        }
    }
    let dual = (0..rows).map(|i| -reduced[cols + i].clone()).collect();
    LpOutcome::Optimal(LpSolution {
        value: -reduced[width].clone(),
        primal,
        dual,
    })
}

fn pivot(tab: &mut [Vec<Rational>], reduced: &mut [Rational], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v = &*v / &p;
    }
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let factor = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &factor * pv;
            }
        }
    }
    let factor = reduced[col].clone();
    for (v, pv) in reduced.iter_mut().zip(&pivot_row) {
        if !pv.is_zero() {
            *v -= &factor * pv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let a = vec![vec![int(1), int(0)], vec![int(0), int(2)], vec![int(3), int(2)]];
        let LpOutcome::Optimal(sol) = maximize(&a, &[int(4), int(12), int(18)], &[int(3), int(5)]) else {
            panic!("expected optimum");
        };
        assert_eq!(sol.value, int(36));
        assert_eq!(sol.primal, vec![int(2), int(6)]);
        // dual optimum (0, 3/2, 1) has the same objective
        assert_eq!(sol.dual, vec![int(0), ratio(3, 2), int(1)]);
    }

    #[test]
    fn detects_unbounded() {
        let a = vec![vec![int(1), int(-1)]];
        assert_eq!(maximize(&a, &[int(1)], &[int(0), int(1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Classic cycling example under Dantzig's rule; Bland's rule must terminate.
        let a = vec![
            vec![ratio(1, 4), int(-8), int(-1), int(9)],
            vec![ratio(1, 2), int(-12), ratio(-1, 2), int(3)],
            vec![int(0), int(0), int(1), int(0)],
        ];
        let c = [ratio(3, 4), int(-20), ratio(1, 2), int(-6)];
        let LpOutcome::Optimal(sol) = maximize(&a, &[int(0), int(0), int(1)], &c) else {
            panic!("expected optimum");
        };
        assert_eq!(sol.value, ratio(5, 4));
    }
}
