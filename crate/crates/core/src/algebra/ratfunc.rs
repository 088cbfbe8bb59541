//! Canonical rational functions in `q, Λ_1, ..., Λ_r`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::{cofactors, poly_gcd, strip_monomial};
use super::poly::{MPoly, Monomial};
use crate::error::{Error, Result};

/// A reduced fraction `num / den`.
///
/// Canonical form: `den` is a genuine polynomial with no monomial factor and
/// leading coefficient 1; `num` is a Laurent polynomial coprime to `den`.
/// Two equal functions therefore have identical fields.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

/// The coefficient field of every localized quantity.
pub type QRational = RatFunc;

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(MPoly::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(MPoly::from_int(c))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFunc {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::from_poly(MPoly::monomial(m))
    }

    /// `q^k`.
    pub fn q_pow(k: i32) -> Self {
        Self::monomial(Monomial::q(k))
    }

    /// `num / den`, reduced.
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("fraction construction"));
        }
        Ok(Self::reduce(num, den))
    }

    /// Assumes `den` nonzero.
    fn reduce(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (_, n, d) = cofactors(&num, &den);
        Self::normalize_units(n, d)
    }

    /// Moves monomial factors and the leading coefficient of a coprime pair
    /// into the numerator.
    fn normalize_units(num: MPoly, den: MPoly) -> Self {
        let m = den.min_monomial();
        let (num, den) = if m.is_one() {
            (num, den)
        } else {
            let inv = m.inv();
            (num.mul_monomial(&inv), den.mul_monomial(&inv))
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1, i.e. a Laurent polynomial.
    pub fn is_laurent_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&MPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Total number of stored terms in numerator and denominator.
    pub fn size(&self) -> usize {
        self.num.len() + self.den.len()
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.num.uses_var(var) || self.den.uses_var(var)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse"));
        }
        Ok(Self::normalize_units(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        Ok(RatFunc {
            num: self.num.pow(k as u32),
            den: self.den.pow(k as u32),
        }
        .renormalized())
    }

    /// Re-establishes the unit normalization after an operation that keeps
    /// numerator and denominator coprime.
    fn renormalized(self) -> Self {
        Self::normalize_units(self.num, self.den)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        RatFunc {
            num: self.num.mul_monomial(m),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &MPoly) -> Self {
        if p.is_monomial() {
            let (m, c) = p.leading_term().unwrap();
            return self.mul_monomial(m).scale(c);
        }
        self * &Self::from_poly(p.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero("div"));
        }
        Ok(self * &other.inv()?)
    }

    /// `deg_q(den) - deg_q(num)`, the order of vanishing at `q = ∞`.
    pub fn q_degree_gap(&self) -> Result<i32> {
        if self.is_zero() {
            return Err(Error::Undefined("q-degree gap of zero"));
        }
        let dn = self.num.degree_range(0).map_or(0, |r| r.1);
        let dd = self.den.degree_range(0).map_or(0, |r| r.1);
        Ok(dd - dn)
    }

    /// Applies a monomial change of variables to numerator and denominator.
    ///
    /// The map must be multiplicative and invertible (for example `q ↦ q^-1`
    /// or a relabeling of the Λ's); the result is re-reduced.
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        let num = self.num.map_monomials(&f);
        let den = self.den.map_monomials(&f);
        let m = den.min_monomial();
        let inv = m.inv();
        Self::normalize_units(num.mul_monomial(&inv), den.mul_monomial(&inv))
    }

    /// `f(q) ↦ f(value)`.
    pub fn substitute_q(&self, value: &RatFunc) -> Result<Self> {
        // q ↦ q^±1 is a ring automorphism, so reduction is preserved.
        if let Some(v) = value.as_poly() {
            if let Some((m, c)) = v.leading_term() {
                let k = m.q_degree();
                if v.is_monomial() && c.is_one() && m.width() == 1 && (k == 1 || k == -1) {
                    if k == 1 {
                        return Ok(self.clone());
                    }
                    return Ok(self.map_monomials(|x| x.mul(&Monomial::q(-2 * x.q_degree()))));
                }
            }
        }
        self.substitute_q_general(value)
    }

    fn substitute_q_general(&self, value: &RatFunc) -> Result<Self> {
        let num = subst_poly(&self.num, value)?;
        let den = subst_poly(&self.den, value)?;
        if den.is_zero() {
            return Err(Error::Pole(alloc::format!(
                "denominator {} vanishes at q = {}",
                self.den,
                value
            )));
        }
        num.checked_div(&den)
    }

    /// Evaluates the variables listed in `values` (by index) at rationals.
    pub fn evaluate(&self, values: &[Option<BigRational>]) -> Result<Self> {
        let num = self
            .num
            .evaluate_partial(values)
            .ok_or(Error::Pole("zero raised to a negative power".into()))?;
        let den = self
            .den
            .evaluate_partial(values)
            .ok_or(Error::Pole("zero raised to a negative power".into()))?;
        if den.is_zero() {
            return Err(Error::Pole(alloc::format!(
                "denominator {} vanishes at the evaluation point",
                self.den
            )));
        }
        RatFunc::new(num, den)
    }

    /// Sums many fractions over their least common denominator, reducing once.
    pub fn sum<I: IntoIterator<Item = RatFunc>>(items: I) -> RatFunc {
        let mut groups: Vec<(MPoly, MPoly)> = Vec::new();
        for t in items {
            if t.is_zero() {
                continue;
            }
            match groups.iter_mut().find(|(d, _)| *d == t.den) {
                Some((_, n)) => *n = &*n + &t.num,
                None => groups.push((t.den, t.num)),
            }
        }
        match groups.len() {
            0 => return RatFunc::zero(),
            1 => {
                let (d, n) = groups.pop().unwrap();
                return RatFunc::reduce(n, d);
            }
            _ => {}
        }
        let mut lcm = groups[0].0.clone();
        for (d, _) in &groups[1..] {
            let (_, _, extra) = cofactors(&lcm, d);
            lcm = &lcm * &extra;
        }
        let mut total = MPoly::zero();
        for (d, n) in &groups {
            let cof = lcm.exact_div(d).expect("lcm is a multiple");
            total = &total + &(n * &cof);
        }
        if total.is_zero() {
            return RatFunc::zero();
        }
        if let Some(q) = total.exact_div(&lcm) {
            return RatFunc::from_poly(q);
        }
        RatFunc::reduce(total, lcm)
    }

    /// The value as a rational constant, if it is one.
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }
}

/// Substitutes `q ↦ value` in a Laurent polynomial by Horner's scheme in
/// each q-degree band.
fn subst_poly(p: &MPoly, value: &RatFunc) -> Result<RatFunc> {
    let bands = p.collect_by(0);
    let mut out = RatFunc::zero();
    for (k, coeff) in bands {
        let vk = value.pow(k)?;
        out = &out + &vk.mul_poly(&coeff);
    }
    Ok(out)
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.num == other.num && self.den == other.den {
            return true;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFunc {}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<MPoly> for RatFunc {
    fn from(p: MPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> Self {
        RatFunc::from_int(c)
    }
}

impl From<BigInt> for RatFunc {
    fn from(c: BigInt) -> Self {
        RatFunc::from_rational(BigRational::from_integer(c))
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            let n = &self.num + &rhs.num;
            return RatFunc::reduce(n, self.den.clone());
        }
        // a/b + c/d = (a*(d/g) + c*(b/g)) / (b*(d/g)), then cancel against g.
        let (g, bg, dg) = cofactors(&self.den, &rhs.den);
        let n = &(&self.num * &dg) + &(&rhs.num * &bg);
        if n.is_zero() {
            return RatFunc::zero();
        }
        let den = &self.den * &dg;
        if g.is_one() {
            return RatFunc::normalize_units(n, den);
        }
        let h = poly_gcd(&n, &g);
        if h.is_one() {
            RatFunc::normalize_units(n, den)
        } else {
            RatFunc::normalize_units(
                n.exact_div(&h).expect("gcd divides"),
                den.exact_div(&h).expect("gcd divides"),
            )
        }
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        // (a/b)(c/d) with cross cancellation.
        let (_, a, d) = cofactors(&self.num, &rhs.den);
        let (_, c, b) = cofactors(&rhs.num, &self.den);
        RatFunc::normalize_units(&a * &c, &b * &d)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; use [`RatFunc::checked_div`] to recover.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: RatFunc) -> RatFunc {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: &RatFunc) -> RatFunc {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Laurent polynomial in `Λ_1..Λ_r` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPoly(MPoly);

impl LambdaPoly {
    pub fn new(p: MPoly) -> Result<Self> {
        if p.uses_var(0) {
            return Err(Error::Domain("Λ-polynomial may not contain q".into()));
        }
        Ok(LambdaPoly(p))
    }

    pub fn as_mpoly(&self) -> &MPoly {
        &self.0
    }

    pub fn into_mpoly(self) -> MPoly {
        self.0
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Element of the fraction field of [`LambdaPoly`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarField(RatFunc);

impl ScalarField {
    pub fn new(f: RatFunc) -> Result<Self> {
        if f.uses_var(0) {
            return Err(Error::Domain("scalar may not contain q".into()));
        }
        Ok(ScalarField(f))
    }

    pub fn monomial(m: Monomial) -> Result<Self> {
        Self::new(RatFunc::monomial(m))
    }

    pub fn as_ratfunc(&self) -> &RatFunc {
        &self.0
    }

    pub fn into_ratfunc(self) -> RatFunc {
        self.0
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Strips monomial factors from a polynomial: useful for comparing
/// denominators up to units.
pub fn primitive_polynomial(p: &MPoly) -> MPoly {
    strip_monomial(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::parse_ratfunc;
    use alloc::string::ToString;

    fn r(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn partial_fraction_identity() {
        assert_eq!(r("1/(1-q)") + r("1/(1-q^-1)"), RatFunc::one());
        assert!((r("1/(1-q)") + r("1/(1-q^-1)")).is_one());
    }

    #[test]
    fn cancellation() {
        let x = r("(1-q^2)/(1-q)");
        assert_eq!(x.num(), r("1+q").num());
        assert!(x.den().is_one());
        assert!((r("Λ1/(1-q)") * r("(1-q)/Λ1")).is_one());
    }

    #[test]
    fn canonical_denominator() {
        let x = r("1/(2*q - 2*q^2)");
        assert!(x.den().min_monomial().is_one());
        assert!(x.den().leading_coeff().is_one());
        assert_eq!(x.to_string(), "(-1/2*q^-1)/(q - 1)");
    }

    #[test]
    fn gaps() {
        assert_eq!(r("1/(1-q)").q_degree_gap().unwrap(), 1);
        assert_eq!(r("(1-q^3)/(1-q)").q_degree_gap().unwrap(), -2);
        assert_eq!(
            r("1/((1-q)*(1-Λ1^-2*q))").q_degree_gap().unwrap(),
            2
        );
        assert!(RatFunc::zero().q_degree_gap().is_err());
    }

    #[test]
    fn substitution() {
        let qi = RatFunc::q_pow(-1);
        assert_eq!(r("1/(1-q)").substitute_q(&qi).unwrap(), r("-q/(1-q)"));
        assert_eq!(r("q").substitute_q(&RatFunc::q_pow(2)).unwrap(), r("q^2"));
        assert_eq!(
            r("(1+q)/(1-Λ1*q)").substitute_q(&qi).unwrap(),
            r("(1+q^-1)/(1-Λ1*q^-1)")
        );
        assert!(r("1/(1-q)").substitute_q(&RatFunc::one()).is_err());
        let general = r("(1+q)/(2-Λ1*q)").substitute_q(&r("Λ1/(1+q)")).unwrap();
        assert_eq!(general, r("(1+q+Λ1)/(2+2*q-Λ1^2)"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(RatFunc::one().checked_div(&RatFunc::zero()).is_err());
        assert!(RatFunc::zero().inv().is_err());
    }
}
