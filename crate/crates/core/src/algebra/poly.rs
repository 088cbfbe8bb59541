//! Sparse multivariate Laurent polynomials over Q.
//!
//! Variable 0 is `q`; variable `i >= 1` is `Λ_i`. Exponent vectors have their
//! trailing zeros trimmed, so polynomials built for different ranks live in
//! one ring and constants carry no rank at all.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector `(e_q, e_Λ1, ..., e_Λn)` with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<i32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_exponents(mut exps: Vec<i32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(index: usize, power: i32) -> Self {
        let mut v = alloc::vec![0; index + 1];
        v[index] = power;
        Self::from_exponents(v)
    }

    /// `q^k`.
    pub fn q(k: i32) -> Self {
        Self::var(0, k)
    }

    /// `Λ_i^k` for `i >= 1`.
    pub fn lambda(i: usize, k: i32) -> Self {
        assert!(i >= 1, "Λ_0 is not a free variable");
        Self::var(i, k)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn exp(&self, index: usize) -> i32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    /// Number of stored slots (highest variable index present plus one).
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn q_degree(&self) -> i32 {
        self.exp(0)
    }

    pub fn lambda_degree(&self) -> i32 {
        self.0.iter().skip(1).sum()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i32, i32) -> i32) -> Self {
        let n = self.width().max(other.width());
        Self::from_exponents((0..n).map(|i| f(self.exp(i), other.exp(i))).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn pow(&self, k: i32) -> Self {
        Self::from_exponents(self.0.iter().map(|e| e * k).collect())
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.min(b))
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.max(b))
    }

    /// True when every exponent is nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    /// Substitutes each variable by a monomial: `x_i ↦ images[i]`
    /// (variables beyond `images` are kept).
    pub fn substitute(&self, images: &[Monomial]) -> Self {
        let mut out = Monomial::one();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let img = match images.get(i) {
                Some(m) => m.pow(e),
                None => Monomial::var(i, e),
            };
            out = out.mul(&img);
        }
        out
    }
}

/// Order: q-degree, then total Λ-degree, then lexicographic on `Λ_1, Λ_2, ...`.
/// Compatible with multiplication, so it is a valid monomial order on
/// genuine (nonnegative-exponent) monomials.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.q_degree()
            .cmp(&other.q_degree())
            .then_with(|| self.lambda_degree().cmp(&other.lambda_degree()))
            .then_with(|| {
                let n = self.width().max(other.width());
                for i in 1..n {
                    match self.exp(i).cmp(&other.exp(i)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate Laurent polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, BigRational::one())
    }

    /// Builds from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(iter: I) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return Some(self.coeff(&Monomial::one()));
        }
        None
    }

    /// Highest variable index in use plus one.
    pub fn width(&self) -> usize {
        self.terms.keys().map(Monomial::width).max().unwrap_or(0)
    }

    /// Componentwise minimum exponent over all terms (the monomial content).
    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, m| acc.meet(m))
    }

    pub fn max_monomial(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, m| acc.join(m))
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_polynomial)
    }

    /// Minimum and maximum exponent of variable `var`, if nonzero.
    pub fn degree_range(&self, var: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|m| m.exp(var));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) != 0)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        if m.is_one() {
            return self.clone();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Applies a monomial substitution termwise. Not guaranteed to be
    /// injective on terms, so coefficients are re-accumulated.
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    /// Groups by the exponent of `var`: returns `exponent -> coefficient`
    /// where each coefficient no longer mentions `var`.
    pub fn collect_by(&self, var: usize) -> BTreeMap<i32, MPoly> {
        let mut out: BTreeMap<i32, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            let rest = m.div(&Monomial::var(var, e));
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Least common denominator of the coefficients and gcd of their
    /// numerators; `self = content * primitive` with an integral primitive
    /// part whose leading coefficient is positive.
    pub fn content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        content
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return MPoly::zero();
        }
        let lc = self.leading_coeff();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    /// Exact division `self / d`, or `None` if `d` does not divide `self`.
    ///
    /// Works for Laurent inputs by shifting both to genuine polynomials so
    /// that the division algorithm terminates.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if d.is_monomial() {
            let (m, c) = d.leading_term()?;
            return Some(self.mul_monomial(&m.inv()).scale(&c.recip()));
        }
        let sm = self.min_monomial();
        let dm = d.min_monomial();
        let a = self.mul_monomial(&sm.inv());
        let b = d.mul_monomial(&dm.inv());
        let q = poly_div_exact(&a, &b)?;
        Some(q.mul_monomial(&sm.div(&dm)))
    }

    /// Evaluates at rational values for variables `0..values.len()`.
    /// Variables beyond that stay symbolic. Errors (None) on `0^negative`.
    pub fn evaluate_partial(&self, values: &[Option<BigRational>]) -> Option<MPoly> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::with_capacity(m.width());
            for (i, &e) in m.exponents().iter().enumerate() {
                match values.get(i).and_then(|v| v.as_ref()) {
                    Some(v) if e != 0 => {
                        if v.is_zero() {
                            if e < 0 {
                                return None;
                            }
                            coeff = BigRational::zero();
                        } else {
                            coeff *= pow_rational(v, e);
                        }
                        rest.push(0);
                    }
                    _ => rest.push(e),
                }
            }
            out.add_term(Monomial::from_exponents(rest), coeff);
        }
        Some(out)
    }
}

pub(crate) fn pow_rational(v: &BigRational, e: i32) -> BigRational {
    let base = if e < 0 { v.recip() } else { v.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

/// Division of genuine polynomials; `None` when inexact.
fn poly_div_exact(a: &MPoly, b: &MPoly) -> Option<MPoly> {
    let (lm_b, lc_b) = b.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
    let lc_inv = lc_b.recip();
    let mut rem = a.clone();
    let mut quot = MPoly::zero();
    while let Some((lm_r, lc_r)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        let t = lm_r.div(&lm_b);
        if !t.is_polynomial() {
            return None;
        }
        let c = lc_r * &lc_inv;
        for (m, x) in b.terms() {
            rem.add_term(m.mul(&t), -(x * &c));
        }
        quot.add_term(t, c);
    }
    Some(quot)
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: &MPoly) -> MPoly {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let m = Monomial::from_exponents(alloc::vec![0, 2, 0, 0]);
        assert_eq!(m.width(), 2);
        assert_eq!(Monomial::from_exponents(alloc::vec![0, 0]), Monomial::one());
    }

    #[test]
    fn order_is_q_first_then_graded_lex() {
        let q = Monomial::q(1);
        let l1 = Monomial::lambda(1, 5);
        assert!(q > l1);
        let a = Monomial::from_exponents(alloc::vec![0, 2, 0]);
        let b = Monomial::from_exponents(alloc::vec![0, 1, 1]);
        assert!(a > b);
        assert!(Monomial::lambda(2, 3) > Monomial::lambda(1, 2));
    }

    #[test]
    fn exact_division_of_laurent_polys() {
        // (1 - q^2) / (1 - q) = 1 + q
        let one = MPoly::one();
        let q = MPoly::monomial(Monomial::q(1));
        let q2 = MPoly::monomial(Monomial::q(2));
        let num = &one - &q2;
        let den = &one - &q;
        assert_eq!(num.exact_div(&den), Some(&one + &q));
        // Λ1^-1 (1 - q) / (1 - q) = Λ1^-1
        let l = MPoly::monomial(Monomial::lambda(1, -1));
        assert_eq!((&l * &den).exact_div(&den), Some(l));
        assert_eq!(one.exact_div(&den), None);
    }

    #[test]
    fn content_is_signed_by_leading_coefficient() {
        let p = MPoly::from_terms([
            (Monomial::q(1), rat(-2, 3)),
            (Monomial::one(), rat(4, 9)),
        ]);
        let c = p.content();
        assert_eq!(c, rat(-2, 9));
        let pp = p.scale(&c.recip());
        assert!(pp.terms().all(|(_, x)| x.is_integer()));
        assert!(pp.leading_coeff().is_positive());
    }
}
