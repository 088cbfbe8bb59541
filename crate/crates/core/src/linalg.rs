//! Fraction-free elimination and exact nullspaces.

use alloc::vec::Vec;

use crate::algebra::{MPoly, RatFunc};
use crate::error::{Error, Result};

/// Row echelon form by Bareiss elimination; returns the pivot columns.
/// Every division is exact, so entries stay polynomial.
pub fn bareiss_echelon(m: &mut [Vec<MPoly>]) -> Result<Vec<usize>> {
    let rows = m.len();
    if rows == 0 {
        return Ok(Vec::new());
    }
    let cols = m[0].len();
    let mut prev = MPoly::one();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..cols {
        if pr == rows {
            break;
        }
        let found = (pr..rows).find(|&i| !m[i][col].is_zero());
        let Some(p) = found else { continue };
        m.swap(pr, p);
        let (top, rest) = m.split_at_mut(pr + 1);
        let prow = &top[pr];
        for row in rest.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..cols {
                let v = &(&prow[col] * &row[j]) - &(&factor * &prow[j]);
                row[j] = v
                    .exact_div(&prev)
                    .ok_or(Error::Domain("inexact Bareiss step".into()))?;
            }
            row[col] = MPoly::zero();
        }
        prev = m[pr][col].clone();
        pivots.push(col);
        pr += 1;
    }
    Ok(pivots)
}

/// Basis of `{x : M x = 0}` in reduced form: the `k`-th vector has a 1 in
/// the `k`-th free column and zeros in the other free columns.
pub fn nullspace(mut m: Vec<Vec<MPoly>>, cols: usize) -> Result<Vec<Vec<RatFunc>>> {
    let pivots = bareiss_echelon(&mut m)?;
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = alloc::vec![RatFunc::zero(); cols];
        x[f] = RatFunc::one();
        for (i, &p) in pivots.iter().enumerate().rev() {
            let row = &m[i];
            let mut acc = Vec::new();
            for j in p + 1..cols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc.push(x[j].mul_poly(&row[j]));
                }
            }
            let s = RatFunc::sum(acc);
            x[p] = -(s.checked_div(&RatFunc::from_poly(row[p].clone()))?);
        }
        basis.push(x);
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn p(s: &str) -> MPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn rank_deficient_polynomial_matrix() {
        // second row is q times the first; third column = q * first column
        let m = alloc::vec![
            alloc::vec![p("1"), p("1 + q"), p("q")],
            alloc::vec![p("q"), p("q + q^2"), p("q^2")],
        ];
        let ns = nullspace(m.clone(), 3).unwrap();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                let s = RatFunc::sum(row.iter().zip(v).map(|(a, x)| x.mul_poly(a)));
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn full_rank_has_trivial_nullspace() {
        let m = alloc::vec![
            alloc::vec![p("1"), p("q")],
            alloc::vec![p("q"), p("1")],
        ];
        assert!(nullspace(m, 2).unwrap().is_empty());
    }
}
