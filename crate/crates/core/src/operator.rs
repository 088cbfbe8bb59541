//! Finite-difference operators `Σ_m c_m(Q) T_m` in normal order
//! (coefficients left of translations), with `T_m = Π_j (q^{∂/∂t_j})^{m_j}`
//! and `Q_i = e^{t_{i-1} - t_i}`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Monomial, RatFunc};
use crate::error::{Error, Result};
use crate::flag::{fixed_points, lambda, FlagFixedPoint, LocalizedClass};
use crate::series::{degrees_up_to, DegreeVector, TwistedSeries};

/// Exponent vector of a Q-monomial, length `r`.
pub type QExponent = Vec<i32>;
/// Translation vector, length `r + 1`.
pub type Shift = Vec<i32>;

/// Laurent polynomial in `Q_1..Q_r` with rational-function coefficients.
pub type QCoefficient = BTreeMap<QExponent, RatFunc>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceOperator {
    rank: usize,
    terms: BTreeMap<Shift, QCoefficient>,
}

impl DifferenceOperator {
    pub fn zero(rank: usize) -> Self {
        DifferenceOperator {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(rank: usize) -> Self {
        Self::monomial(rank, vec![0; rank + 1], vec![0; rank], RatFunc::one())
    }

    /// `c · Q^a · T_m`.
    pub fn monomial(rank: usize, shift: Shift, qexp: QExponent, c: RatFunc) -> Self {
        let mut op = Self::zero(rank);
        op.add_term(shift, qexp, c);
        op
    }

    /// `T_m`.
    pub fn translation(rank: usize, shift: Shift) -> Self {
        Self::monomial(rank, shift, vec![0; rank], RatFunc::one())
    }

    /// Multiplication by `Q^a`.
    pub fn q_multiplication(rank: usize, qexp: QExponent) -> Self {
        Self::monomial(rank, vec![0; rank + 1], qexp, RatFunc::one())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn add_term(&mut self, shift: Shift, qexp: QExponent, c: RatFunc) {
        assert_eq!(shift.len(), self.rank + 1, "shift length");
        assert_eq!(qexp.len(), self.rank, "Q-exponent length");
        if c.is_zero() {
            return;
        }
        let coeff = self.terms.entry(shift.clone()).or_default();
        let slot = coeff.entry(qexp.clone()).or_insert_with(RatFunc::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            coeff.remove(&qexp);
            if coeff.is_empty() {
                self.terms.remove(&shift);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Shift, &QCoefficient)> {
        self.terms.iter()
    }

    /// Flattened `(shift, Q-exponent, coefficient)` triples.
    pub fn monomials(&self) -> impl Iterator<Item = (&Shift, &QExponent, &RatFunc)> {
        self.terms
            .iter()
            .flat_map(|(m, c)| c.iter().map(move |(a, v)| (m, a, v)))
    }

    pub fn coefficient(&self, shift: &[i32], qexp: &[i32]) -> RatFunc {
        self.terms
            .get(shift)
            .and_then(|c| c.get(qexp))
            .cloned()
            .unwrap_or_else(RatFunc::zero)
    }

    pub fn shifts(&self) -> impl Iterator<Item = &Shift> {
        self.terms.keys()
    }

    /// Largest `ℓ1` norm of a Q-exponent: the truncation cost of applying
    /// this operator to a series.
    pub fn q_degree(&self) -> u32 {
        self.monomials()
            .map(|(_, a, _)| a.iter().map(|x| x.unsigned_abs()).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let mut out = self.clone();
        for (m, a, c) in other.monomials() {
            out.add_term(m.clone(), a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&RatFunc::from_int(-1)))
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        let mut out = Self::zero(self.rank);
        for (m, a, v) in self.monomials() {
            out.add_term(m.clone(), a.clone(), v * c);
        }
        out
    }
}

/// Exponent `k` in `T_m Q^a = q^k Q^a T_m`: `k = Σ_i a_i (m_{i-1} - m_i)`.
pub fn commutation_exponent(shift: &[i32], qexp: &[i32]) -> i32 {
    qexp.iter()
        .enumerate()
        .map(|(k, &a)| a * (shift[k] - shift[k + 1]))
        .sum()
}

/// `A ∘ B`, normal ordered.
pub fn compose(a: &DifferenceOperator, b: &DifferenceOperator) -> Result<DifferenceOperator> {
    if a.rank != b.rank {
        return Err(Error::RankMismatch(a.rank, b.rank));
    }
    let mut out = DifferenceOperator::zero(a.rank);
    for (ma, qa, ca) in a.monomials() {
        for (mb, qb, cb) in b.monomials() {
            let k = commutation_exponent(ma, qb);
            let shift: Shift = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            let qexp: QExponent = qa.iter().zip(qb).map(|(x, y)| x + y).collect();
            let c = (ca * cb).mul_monomial(&Monomial::q(k));
            out.add_term(shift, qexp, c);
        }
    }
    Ok(out)
}

/// `[A, B] = A∘B - B∘A`.
pub fn commutator(a: &DifferenceOperator, b: &DifferenceOperator) -> Result<DifferenceOperator> {
    compose(a, b)?.sub(&compose(b, a)?)
}

/// Factor by which `T_m` multiplies the coefficient of `Q^d` at `σ`:
/// `Π_j (Λ_{σ(j)}^{-1} q^{d_{j+1} - d_j})^{m_j}`.
pub fn translation_factor(shift: &[i32], d: &DegreeVector, sigma: &FlagFixedPoint) -> Monomial {
    let r = sigma.rank();
    let mut m = Monomial::one();
    for (j, &mj) in shift.iter().enumerate() {
        if mj != 0 {
            let f = lambda(sigma.image(j), r)
                .inv()
                .mul(&Monomial::q((d.get(j + 1) - d.get(j)) as i32));
            m = m.mul(&f.pow(mj));
        }
    }
    m
}

/// Result truncation for applying `op` to a series of truncation `avail`.
pub fn result_truncation(op: &DifferenceOperator, avail: u32) -> Result<u32> {
    let g = op.q_degree();
    if g > avail {
        return Err(Error::Truncation {
            required: g as i64,
            available: avail as i64,
        });
    }
    Ok(avail - g)
}

/// `(D I)_d^σ` for all `|d| <= truncation` at one fixed point.
pub fn apply_at(
    op: &DifferenceOperator,
    series: &TwistedSeries,
    sigma: &FlagFixedPoint,
    truncation: u32,
) -> Result<BTreeMap<DegreeVector, RatFunc>> {
    let mut out = BTreeMap::new();
    for d in degrees_up_to(series.rank(), truncation) {
        let mut parts = Vec::new();
        for (m, a, c) in op.monomials() {
            let src = match d.checked_sub(a) {
                Some(s) => s,
                None => continue,
            };
            if src.total() > series.truncation() {
                return Err(Error::Truncation {
                    required: src.total() as i64,
                    available: series.truncation() as i64,
                });
            }
            let j = series.value(&src, sigma).expect("complete series");
            if j.is_zero() {
                continue;
            }
            let f = translation_factor(m, &src, sigma);
            parts.push(&j.mul_monomial(&f) * c);
        }
        out.insert(d, RatFunc::sum(parts));
    }
    Ok(out)
}

/// Coefficientwise action on a twisted series, truncated at
/// `D_S - (Q-degree of op)`.
pub fn apply_operator(op: &DifferenceOperator, series: &TwistedSeries) -> Result<TwistedSeries> {
    if op.rank() != series.rank() {
        return Err(Error::RankMismatch(op.rank(), series.rank()));
    }
    let trunc = result_truncation(op, series.truncation())?;
    let r = series.rank();
    let per_sigma = fixed_points(r)?
        .iter()
        .map(|s| apply_at(op, series, s, trunc))
        .collect::<Result<Vec<_>>>()?;
    crate::series::assemble_series(r, trunc, per_sigma)
}

/// Convenience: the class `(D I)_d` at one degree.
pub fn applied_class(
    op: &DifferenceOperator,
    series: &TwistedSeries,
    d: &DegreeVector,
) -> Result<LocalizedClass> {
    let r = series.rank();
    LocalizedClass::try_from_fn(r, |s| {
        let m = apply_at(op, series, s, d.total())?;
        Ok(m[d].clone())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::solve_jseries;

    #[test]
    fn commutation_rule() {
        let t0 = DifferenceOperator::translation(1, vec![1, 0]);
        let q1 = DifferenceOperator::q_multiplication(1, vec![1]);
        let c = compose(&t0, &q1).unwrap();
        let expect = DifferenceOperator::monomial(1, vec![1, 0], vec![1], RatFunc::q_pow(1));
        assert_eq!(c, expect);
    }

    #[test]
    fn identity_is_neutral() {
        let op = DifferenceOperator::monomial(2, vec![0, 1, 0], vec![1, 0], RatFunc::from_int(3));
        let id = DifferenceOperator::identity(2);
        assert_eq!(compose(&op, &id).unwrap(), op);
        assert_eq!(compose(&id, &op).unwrap(), op);
    }

    #[test]
    fn identity_and_total_translation_fix_the_series() {
        let s = solve_jseries(2, 2).unwrap();
        let id = DifferenceOperator::identity(2);
        assert_eq!(apply_operator(&id, &s).unwrap(), s);
        let t = DifferenceOperator::translation(2, vec![1, 1, 1]);
        assert_eq!(apply_operator(&t, &s).unwrap(), s);
    }

    #[test]
    fn truncation_exhaustion() {
        let s = solve_jseries(1, 1).unwrap();
        let q2 = DifferenceOperator::q_multiplication(1, vec![2]);
        assert!(matches!(
            apply_operator(&q2, &s),
            Err(Error::Truncation { .. })
        ));
    }
}
