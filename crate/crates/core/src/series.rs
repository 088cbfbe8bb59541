//! The twisted series `I = p^{ln Q / ln q} Σ_d J_d Q^d` in localized form and
//! the recursion that determines its coefficients.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_rational::BigRational;

use crate::algebra::{MPoly, Monomial, RatFunc};
use crate::error::{Error, Result};
use crate::flag::{fixed_points, lambda, restrict_p, restrict_x, FlagFixedPoint, LocalizedClass};

/// `(d_1, ..., d_r)` with virtual `d_0 = d_{r+1} = 0`.
///
/// Ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DegreeVector(Vec<u32>);

impl DegreeVector {
    pub fn new(entries: Vec<u32>) -> Self {
        DegreeVector(entries)
    }

    pub fn zero(r: usize) -> Self {
        DegreeVector(vec![0; r])
    }

    pub fn unit(r: usize, i: usize) -> Self {
        let mut v = vec![0; r];
        v[i - 1] = 1;
        DegreeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `d_i` for `0 <= i <= r+1`, zero at the virtual ends.
    pub fn get(&self, i: usize) -> i64 {
        if i == 0 || i > self.0.len() {
            0
        } else {
            self.0[i - 1] as i64
        }
    }

    /// `d - 1_i` if it stays nonnegative.
    pub fn minus_unit(&self, i: usize) -> Option<DegreeVector> {
        if self.0[i - 1] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i - 1] -= 1;
        Some(DegreeVector(v))
    }

    /// `d - a` for a Laurent Q-exponent `a`, if nonnegative.
    pub fn checked_sub(&self, a: &[i32]) -> Option<DegreeVector> {
        let mut v = Vec::with_capacity(self.0.len());
        for (x, &y) in self.0.iter().zip(a) {
            let e = *x as i64 - y as i64;
            if e < 0 {
                return None;
            }
            v.push(e as u32);
        }
        Some(DegreeVector(v))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl Ord for DegreeVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for DegreeVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All degree vectors of rank `r` and total degree exactly `n`.
pub fn degrees_of_total(r: usize, n: u32) -> Vec<DegreeVector> {
    fn rec(r: usize, n: u32, prefix: &mut Vec<u32>, out: &mut Vec<DegreeVector>) {
        if prefix.len() + 1 == r {
            prefix.push(n);
            out.push(DegreeVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in 0..=n {
            prefix.push(k);
            rec(r, n - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All degree vectors with `|d| <= max`, in ascending order.
pub fn degrees_up_to(r: usize, max: u32) -> Vec<DegreeVector> {
    (0..=max).flat_map(|n| degrees_of_total(r, n)).collect()
}

/// Truncated twisted series: `J_d` for every `|d| <= truncation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedSeries {
    rank: usize,
    truncation: u32,
    coeffs: BTreeMap<DegreeVector, LocalizedClass>,
}

impl TwistedSeries {
    /// Checks completeness of the coefficient table.
    pub fn new(
        rank: usize,
        truncation: u32,
        coeffs: BTreeMap<DegreeVector, LocalizedClass>,
    ) -> Result<Self> {
        for d in degrees_up_to(rank, truncation) {
            match coeffs.get(&d) {
                Some(c) if c.rank() == rank => {}
                Some(c) => return Err(Error::RankMismatch(c.rank(), rank)),
                None => {
                    return Err(Error::Domain(alloc::format!(
                        "missing coefficient at degree {:?}",
                        d.entries()
                    )))
                }
            }
        }
        if coeffs.keys().any(|d| d.rank() != rank || d.total() > truncation) {
            return Err(Error::Domain("coefficient outside the truncation".into()));
        }
        Ok(TwistedSeries {
            rank,
            truncation,
            coeffs,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn coefficient(&self, d: &DegreeVector) -> Option<&LocalizedClass> {
        self.coeffs.get(d)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&DegreeVector, &LocalizedClass)> {
        self.coeffs.iter()
    }

    /// `J_d^σ`, zero for degrees with a negative entry.
    pub fn value(&self, d: &DegreeVector, sigma: &FlagFixedPoint) -> Option<&RatFunc> {
        self.coeffs.get(d).map(|c| c.at(sigma))
    }

    /// Applies `f` to every cell.
    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        TwistedSeries {
            rank: self.rank,
            truncation: self.truncation,
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, c)| (d.clone(), c.map(&f)))
                .collect(),
        }
    }
}

/// Monomial `Λ_{σ(j)}^{-1} q^{d_{j+1} - d_j}`: the factor a translation
/// `q^{∂/∂t_j}` contributes to the coefficient of `Q^d` at `σ`.
pub fn shift_monomial(j: usize, d: &DegreeVector, sigma: &FlagFixedPoint) -> Monomial {
    let r = sigma.rank();
    lambda(sigma.image(j), r)
        .inv()
        .mul(&Monomial::q((d.get(j + 1) - d.get(j)) as i32))
}

/// [`shift_monomial`] as a rational function.
pub fn shift_action(j: usize, d: &DegreeVector, sigma: &FlagFixedPoint) -> Result<RatFunc> {
    if j > sigma.rank() {
        return Err(Error::Domain(alloc::format!("translation index {} out of range", j)));
    }
    Ok(RatFunc::monomial(shift_monomial(j, d, sigma)))
}

/// Solve the recursion in `q` or, for the dual series, in `q^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum QDirection {
    #[default]
    Forward,
    Inverted,
}

impl QDirection {
    fn sign(self) -> i32 {
        match self {
            QDirection::Forward => 1,
            QDirection::Inverted => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveOptions {
    pub direction: QDirection,
    /// Abort when a numerator or denominator exceeds this many terms.
    pub max_terms: Option<usize>,
}

/// `Σ_{i=1}^{r+1} x_i|_σ (q^{d_i - d_{i-1}} - 1)`.
pub fn recursion_bracket(d: &DegreeVector, sigma: &FlagFixedPoint, dir: QDirection) -> MPoly {
    let r = sigma.rank();
    let one = BigRational::from_integer(1.into());
    let mut out = MPoly::zero();
    for i in 1..=r + 1 {
        let x = restrict_x(sigma, i);
        let e = dir.sign() * (d.get(i) - d.get(i - 1)) as i32;
        out.add_term(x.mul(&Monomial::q(e)), one.clone());
        out.add_term(x, -one.clone());
    }
    out
}

fn check_size(v: &RatFunc, limit: Option<usize>) -> Result<()> {
    if let Some(limit) = limit {
        let size = v.num().len().max(v.den().len());
        if size > limit {
            return Err(Error::TermLimit { size, limit });
        }
    }
    Ok(())
}

/// `J_d^σ` for all `|d| <= truncation` at one fixed point.
pub fn solve_fixed_point(
    sigma: &FlagFixedPoint,
    truncation: u32,
    opts: SolveOptions,
) -> Result<BTreeMap<DegreeVector, RatFunc>> {
    let r = sigma.rank();
    let s = opts.direction.sign();
    let mut out: BTreeMap<DegreeVector, RatFunc> = BTreeMap::new();
    for d in degrees_up_to(r, truncation) {
        if d.is_zero() {
            out.insert(d, RatFunc::one());
            continue;
        }
        let bracket = recursion_bracket(&d, sigma, opts.direction);
        if bracket.is_zero() {
            return Err(Error::ZeroDivisor {
                sigma: sigma.images().to_vec(),
                degree: d.entries().to_vec(),
            });
        }
        let mut rhs = Vec::new();
        for i in 1..=r {
            if let Some(prev) = d.minus_unit(i) {
                let m = restrict_x(sigma, i + 1)
                    .mul(&Monomial::q(s * (d.get(i + 1) - d.get(i)) as i32));
                rhs.push(out[&prev].mul_monomial(&m));
            }
        }
        let rhs = RatFunc::sum(rhs);
        let j = rhs.checked_div(&RatFunc::from_poly(bracket))?;
        check_size(&j, opts.max_terms)?;
        out.insert(d, j);
    }
    Ok(out)
}

/// Assembles per-fixed-point solutions (in [`fixed_points`] order).
pub fn assemble_series(
    r: usize,
    truncation: u32,
    per_sigma: Vec<BTreeMap<DegreeVector, RatFunc>>,
) -> Result<TwistedSeries> {
    let mut cols: Vec<_> = per_sigma.into_iter().map(|m| m.into_iter()).collect();
    let mut coeffs = BTreeMap::new();
    for d in degrees_up_to(r, truncation) {
        let mut vals = Vec::with_capacity(cols.len());
        for col in cols.iter_mut() {
            let (dd, v) = col
                .next()
                .ok_or_else(|| Error::Domain("incomplete fixed-point solution".into()))?;
            debug_assert_eq!(dd, d);
            vals.push(v);
        }
        coeffs.insert(d, LocalizedClass::from_values(r, vals)?);
    }
    TwistedSeries::new(r, truncation, coeffs)
}

pub fn solve_jseries_with(r: usize, truncation: u32, opts: SolveOptions) -> Result<TwistedSeries> {
    let per_sigma = fixed_points(r)?
        .iter()
        .map(|s| solve_fixed_point(s, truncation, opts))
        .collect::<Result<Vec<_>>>()?;
    assemble_series(r, truncation, per_sigma)
}

/// `J_d` for all `|d| <= truncation` from the recursion, with `J_0 = 1`.
pub fn solve_jseries(r: usize, truncation: u32) -> Result<TwistedSeries> {
    solve_jseries_with(r, truncation, SolveOptions::default())
}

fn binomial_product(factors: impl IntoIterator<Item = Monomial>) -> MPoly {
    let one = MPoly::one();
    factors
        .into_iter()
        .fold(MPoly::one(), |acc, m| &acc * &(&one - &MPoly::monomial(m)))
}

/// Product formula for rank 1: `1 / Π_{j=0,1} Π_{m=1}^d (1 - p Λ_j q^m)`.
pub fn closed_form_r1(d: u32) -> Result<LocalizedClass> {
    LocalizedClass::try_from_fn(1, |s| {
        let p = restrict_p(s, 1)?;
        let den = binomial_product(
            (0..=1).flat_map(|j| (1..=d as i32).map(move |m| (j, m))).map(|(j, m)| {
                p.mul(&lambda(j, 1)).mul(&Monomial::q(m))
            }),
        );
        RatFunc::new(MPoly::one(), den)
    })
}

/// Product formula for rank 2 with numerator `Π_{m=m0}^{d_1+d_2} (1 - p_1 p_2 q^m)`.
pub fn closed_form_r2_with_start(d: &DegreeVector, m0: u32) -> Result<LocalizedClass> {
    if d.rank() != 2 {
        return Err(Error::RankMismatch(d.rank(), 2));
    }
    let (d1, d2) = (d.get(1) as i32, d.get(2) as i32);
    LocalizedClass::try_from_fn(2, |s| {
        let p1 = restrict_p(s, 1)?;
        let p2 = restrict_p(s, 2)?;
        let p12 = p1.mul(&p2);
        let num = binomial_product((m0 as i32..=d1 + d2).map(|m| p12.mul(&Monomial::q(m))));
        let mut den_factors = Vec::new();
        for j in 0..=2 {
            let l = lambda(j, 2);
            for m in 1..=d1 {
                den_factors.push(p1.mul(&l).mul(&Monomial::q(m)));
            }
            for m in 1..=d2 {
                den_factors.push(p2.div(&l).mul(&Monomial::q(m)));
            }
        }
        RatFunc::new(num, binomial_product(den_factors))
    })
}

/// Rank-2 product formula normalized so that `J_0 = 1` (numerator from `m = 1`).
pub fn closed_form_r2(d: &DegreeVector) -> Result<LocalizedClass> {
    closed_form_r2_with_start(d, 1)
}

/// `J_{1_i}^σ = (1-q)^{-1} (1 - (p_{i-1}^{-1} p_i^2 p_{i+1}^{-1})|_σ q)^{-1}`.
pub fn linear_term(i: usize, sigma: &FlagFixedPoint) -> Result<RatFunc> {
    let w = restrict_p(sigma, i - 1)?
        .inv()
        .mul(&restrict_p(sigma, i)?.pow(2))
        .mul(&restrict_p(sigma, i + 1)?.inv());
    let den = binomial_product([Monomial::q(1), w.mul(&Monomial::q(1))]);
    RatFunc::new(MPoly::one(), den)
}

/// Outcome of comparing `Ĥ I` against `(Σ Λ_j^{-1}) I`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EigenReport {
    pub checked: usize,
    /// `(σ images, degree)` of every mismatching cell.
    pub failures: Vec<(Vec<usize>, Vec<u32>)>,
}

impl EigenReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// Applies the Toda operator through the operator engine and compares with
/// `(Σ Λ_j^{-1}) I` for every `|d| <= D - 1`.
pub fn check_eigen(series: &TwistedSeries) -> Result<EigenReport> {
    let r = series.rank();
    let h = crate::conservation::build_toda_operator(r)?;
    let applied = crate::operator::apply_operator(&h, series)?;
    let lam = RatFunc::from_poly(crate::flag::inverse_lambda_sum(r));
    let mut report = EigenReport::default();
    let pts = fixed_points(r)?;
    for (d, cls) in applied.coefficients() {
        let orig = series.coefficient(d).expect("same degree range");
        for s in &pts {
            report.checked += 1;
            if *cls.at(s) != &lam * orig.at(s) {
                report.failures.push((s.images().to_vec(), d.entries().to_vec()));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_ratfunc;

    fn sigma(v: &[usize]) -> FlagFixedPoint {
        FlagFixedPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn degree_enumeration() {
        assert_eq!(degrees_up_to(2, 2).len(), 6);
        assert_eq!(degrees_up_to(3, 3).len(), 20);
        let d = degrees_up_to(2, 2);
        assert!(d.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(d[0], DegreeVector::zero(2));
    }

    #[test]
    fn shift_actions() {
        let s = sigma(&[0, 1]);
        let d = DegreeVector::new(vec![1]);
        assert_eq!(
            shift_action(0, &d, &s).unwrap(),
            parse_ratfunc("Λ1*q").unwrap()
        );
        assert_eq!(
            shift_action(1, &d, &s).unwrap(),
            parse_ratfunc("Λ1^-1*q^-1").unwrap()
        );
        for r in 1..=3 {
            for s in fixed_points(r).unwrap() {
                let z = DegreeVector::zero(r);
                let prod = (0..=r).fold(Monomial::one(), |m, j| m.mul(&shift_monomial(j, &z, &s)));
                assert!(prod.is_one());
            }
        }
    }

    #[test]
    fn first_coefficients() {
        let s = solve_jseries(1, 1).unwrap();
        let id = sigma(&[0, 1]);
        assert!(s.value(&DegreeVector::zero(1), &id).unwrap().is_one());
        assert_eq!(
            s.value(&DegreeVector::new(vec![1]), &id).unwrap(),
            &parse_ratfunc("1/((1-q)*(1-Λ1^2*q))").unwrap()
        );
        let s2 = solve_jseries(2, 1).unwrap();
        assert_eq!(
            s2.value(&DegreeVector::new(vec![1, 0]), &sigma(&[0, 1, 2])).unwrap(),
            &parse_ratfunc("1/((1-q)*(1-Λ1^2*Λ2*q))").unwrap()
        );
    }

    #[test]
    fn closed_forms_small() {
        let s = solve_jseries(1, 3).unwrap();
        for d in 0..=3 {
            assert_eq!(
                s.coefficient(&DegreeVector::new(vec![d])).unwrap(),
                &closed_form_r1(d).unwrap()
            );
        }
        let s2 = solve_jseries(2, 2).unwrap();
        for d in degrees_up_to(2, 2) {
            assert_eq!(s2.coefficient(&d).unwrap(), &closed_form_r2(&d).unwrap());
        }
    }

    #[test]
    fn closed_form_r2_index_from_zero_is_not_normalized() {
        let d = DegreeVector::zero(2);
        let c = closed_form_r2_with_start(&d, 0).unwrap();
        assert!(c.values().iter().all(|v| !v.is_one()));
    }

    #[test]
    fn toda_eigenfunction_small() {
        assert!(check_eigen(&solve_jseries(1, 3).unwrap()).unwrap().passed());
        assert!(check_eigen(&solve_jseries(2, 2).unwrap()).unwrap().passed());
    }
}
