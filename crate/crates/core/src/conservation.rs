//! The Toda operator, its commutant inside a finite ansatz, and the
//! common-eigenfunction check on solved series.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{MPoly, RatFunc};
use crate::error::{Error, Result};
use crate::flag::fixed_points;
use crate::linalg::nullspace;
use crate::operator::{
    apply_operator, commutator, compose, DifferenceOperator, QExponent, Shift,
};
use crate::series::{DegreeVector, TwistedSeries};

/// `Ĥ = T_{e_0} + Σ_{j≥1} T_{e_j} ∘ (1 - Q_j)`.
///
/// Multiplication acts first, so in normal order the coefficient of
/// `T_{e_j}` is `1 - q^{-1} Q_j`.
pub fn build_toda_operator(r: usize) -> Result<DifferenceOperator> {
    if r == 0 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    let unit = |j: usize| {
        let mut e = vec![0; r + 1];
        e[j] = 1;
        e
    };
    let mut h = DifferenceOperator::translation(r, unit(0));
    for j in 1..=r {
        let mut qe = vec![0; r];
        qe[j - 1] = 1;
        let factor = DifferenceOperator::identity(r)
            .sub(&DifferenceOperator::q_multiplication(r, qe))?;
        h = h.add(&compose(&DifferenceOperator::translation(r, unit(j)), &factor)?)?;
    }
    Ok(h)
}

/// `T = Π_j q^{∂/∂t_j}`.
pub fn total_translation(r: usize) -> DifferenceOperator {
    DifferenceOperator::translation(r, vec![1; r + 1])
}

/// Search space: operators `Σ c_{m,a} Q^a T_m` with `m` in `shifts` and
/// `a ≥ 0`, `|a| <= q_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorAnsatz {
    pub rank: usize,
    pub shifts: Vec<Shift>,
    pub q_degree: u32,
}

impl OperatorAnsatz {
    /// All shift vectors with entries in `{0, 1}`.
    pub fn binary(rank: usize, q_degree: u32) -> Self {
        let shifts = (0u32..1 << (rank + 1))
            .map(|bits| (0..=rank).map(|j| ((bits >> j) & 1) as i32).collect())
            .collect();
        Self::new(rank, shifts, q_degree)
    }

    pub fn new(rank: usize, mut shifts: Vec<Shift>, q_degree: u32) -> Self {
        shifts.sort();
        shifts.dedup();
        OperatorAnsatz {
            rank,
            shifts,
            q_degree,
        }
    }

    /// Unknowns `(m, a)` in fixed column order.
    pub fn columns(&self) -> Vec<(Shift, QExponent)> {
        let exps = q_exponents(self.rank, self.q_degree);
        let mut out = Vec::new();
        for m in &self.shifts {
            for a in &exps {
                out.push((m.clone(), a.clone()));
            }
        }
        out
    }

    /// Coordinates of `op` in the ansatz columns, or `None` if some term
    /// falls outside.
    pub fn coordinates(&self, op: &DifferenceOperator) -> Option<Vec<RatFunc>> {
        let cols = self.columns();
        let index: BTreeMap<(&Shift, &QExponent), usize> =
            cols.iter().enumerate().map(|(i, (m, a))| ((m, a), i)).collect();
        let mut v = vec![RatFunc::zero(); cols.len()];
        for (m, a, c) in op.monomials() {
            let i = *index.get(&(m, a))?;
            v[i] = c.clone();
        }
        Some(v)
    }
}

/// Nonnegative exponent vectors of length `r` with total at most `g`.
pub fn q_exponents(r: usize, g: u32) -> Vec<QExponent> {
    let mut out = Vec::new();
    for total in 0..=g {
        crate::series::degrees_of_total(r, total)
            .into_iter()
            .for_each(|d| out.push(d.entries().iter().map(|&x| x as i32).collect()));
    }
    out
}

/// Basis of the commutant of `Ĥ` inside the ansatz, with the reduced-form
/// coordinates used to build it.
#[derive(Clone, Debug)]
pub struct Commutant {
    pub ansatz: OperatorAnsatz,
    pub coordinates: Vec<Vec<RatFunc>>,
    pub operators: Vec<DifferenceOperator>,
}

impl Commutant {
    pub fn dimension(&self) -> usize {
        self.operators.len()
    }

    /// Whether `op` lies in the span of the basis.
    pub fn contains(&self, op: &DifferenceOperator) -> bool {
        let Some(v) = self.ansatz.coordinates(op) else {
            return false;
        };
        let free: Vec<usize> = self
            .coordinates
            .iter()
            .map(|b| b.iter().position(|x| x.is_one()).expect("reduced basis"))
            .collect();
        // a reduced basis vector is 1 at its own free column and 0 at the others
        let mut combo = vec![RatFunc::zero(); v.len()];
        for (b, &f) in self.coordinates.iter().zip(&free) {
            if v[f].is_zero() {
                continue;
            }
            for (c, x) in combo.iter_mut().zip(b) {
                *c = &*c + &(x * &v[f]);
            }
        }
        combo == v
    }
}

/// Exact nullspace of `D ↦ [Ĥ, D]` restricted to the ansatz.
pub fn commutant_search(ansatz: &OperatorAnsatz) -> Result<Commutant> {
    let r = ansatz.rank;
    let h = build_toda_operator(r)?;
    let cols = ansatz.columns();
    let mut images = Vec::with_capacity(cols.len());
    for (m, a) in &cols {
        let e = DifferenceOperator::monomial(r, m.clone(), a.clone(), RatFunc::one());
        images.push(commutator(&h, &e)?);
    }
    let mut row_index: BTreeMap<(Shift, QExponent), usize> = BTreeMap::new();
    for img in &images {
        for (m, a, _) in img.monomials() {
            let n = row_index.len();
            row_index.entry((m.clone(), a.clone())).or_insert(n);
        }
    }
    let mut matrix = vec![vec![MPoly::zero(); cols.len()]; row_index.len()];
    for (j, img) in images.iter().enumerate() {
        for (m, a, c) in img.monomials() {
            let i = row_index[&(m.clone(), a.clone())];
            let p = c
                .as_poly()
                .ok_or(Error::Domain("non-polynomial commutator entry".into()))?;
            matrix[i][j] = p.clone();
        }
    }
    let basis = nullspace(matrix, cols.len())?;
    let operators = basis
        .iter()
        .map(|v| {
            let mut op = DifferenceOperator::zero(r);
            for ((m, a), c) in cols.iter().zip(v) {
                op.add_term(m.clone(), a.clone(), c.clone());
            }
            op
        })
        .collect();
    Ok(Commutant {
        ansatz: ansatz.clone(),
        coordinates: basis,
        operators,
    })
}

/// Result of testing `D I = λ I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EigenVerdict {
    Eigenvalue { value: RatFunc, checked_to: u32 },
    /// The degree-zero ratio differs between fixed points.
    SigmaDependent { values: Vec<RatFunc> },
    /// First cell where `D I` and `λ I` differ.
    Mismatch { sigma: Vec<usize>, degree: Vec<u32> },
}

impl EigenVerdict {
    pub fn eigenvalue(&self) -> Option<&RatFunc> {
        match self {
            EigenVerdict::Eigenvalue { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Reads `λ` off the `d = 0` layer and checks `D I = λ I` up to
/// `|d| <= D_S - g`.
pub fn verify_common_eigen(op: &DifferenceOperator, series: &TwistedSeries) -> Result<EigenVerdict> {
    let applied = apply_operator(op, series)?;
    let r = series.rank();
    let pts = fixed_points(r)?;
    let zero = DegreeVector::zero(r);
    let ratios = pts
        .iter()
        .map(|s| {
            let top = applied.value(&zero, s).expect("degree zero");
            top.checked_div(series.value(&zero, s).expect("degree zero"))
        })
        .collect::<Result<Vec<_>>>()?;
    if ratios.iter().any(|x| *x != ratios[0]) {
        return Ok(EigenVerdict::SigmaDependent { values: ratios });
    }
    let lam = ratios.into_iter().next().expect("at least one fixed point");
    for (d, cls) in applied.coefficients() {
        let orig = series.coefficient(d).expect("same degree range");
        for s in &pts {
            if *cls.at(s) != &lam * orig.at(s) {
                return Ok(EigenVerdict::Mismatch {
                    sigma: s.images().to_vec(),
                    degree: d.entries().to_vec(),
                });
            }
        }
    }
    Ok(EigenVerdict::Eigenvalue {
        value: lam,
        checked_to: applied.truncation(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::inverse_lambda_sum;
    use crate::series::solve_jseries;

    #[test]
    fn toda_shape() {
        for r in 1..=3 {
            let h = build_toda_operator(r).unwrap();
            assert_eq!(h.shifts().count(), r + 1);
        }
        let h = build_toda_operator(1).unwrap();
        assert_eq!(h.coefficient(&[0, 1], &[1]), -RatFunc::q_pow(-1));
    }

    #[test]
    fn eigen_of_toda_and_translation() {
        let s = solve_jseries(1, 3).unwrap();
        let h = build_toda_operator(1).unwrap();
        let v = verify_common_eigen(&h, &s).unwrap();
        assert_eq!(v.eigenvalue(), Some(&RatFunc::from_poly(inverse_lambda_sum(1))));
        let t = verify_common_eigen(&total_translation(1), &s).unwrap();
        assert!(t.eigenvalue().unwrap().is_one());
    }

    #[test]
    fn single_translation_is_not_an_eigenoperator() {
        let s = solve_jseries(1, 2).unwrap();
        let t0 = DifferenceOperator::translation(1, vec![1, 0]);
        assert!(matches!(
            verify_common_eigen(&t0, &s).unwrap(),
            EigenVerdict::SigmaDependent { .. }
        ));
    }

    #[test]
    fn r1_commutant_contains_the_obvious_laws() {
        let a = OperatorAnsatz::new(
            1,
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
            1,
        );
        let c = commutant_search(&a).unwrap();
        assert!(c.contains(&DifferenceOperator::identity(1)));
        assert!(c.contains(&build_toda_operator(1).unwrap()));
        assert!(c.contains(&total_translation(1)));
        assert!(!c.contains(&DifferenceOperator::translation(1, vec![1, 0])));
        for x in &c.operators {
            for y in &c.operators {
                assert!(commutator(x, y).unwrap().is_zero());
            }
        }
    }
}
