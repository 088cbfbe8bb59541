//! Torus fixed points of the complete flag manifold of C^{r+1} and
//! localization over them.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{MPoly, Monomial, RatFunc};
use crate::error::{Error, Result};

/// A permutation σ of {0..r}, stored as its image list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FlagFixedPoint {
    perm: Vec<usize>,
}

impl FlagFixedPoint {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        if n < 2 {
            return Err(Error::Domain("a fixed point needs rank >= 1".into()));
        }
        let mut seen = vec![false; n];
        for &x in &perm {
            if x >= n || seen[x] {
                return Err(Error::Domain(alloc::format!("{:?} is not a permutation", perm)));
            }
            seen[x] = true;
        }
        Ok(FlagFixedPoint { perm })
    }

    pub fn identity(r: usize) -> Self {
        FlagFixedPoint {
            perm: (0..=r).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.perm.len() - 1
    }

    pub fn images(&self) -> &[usize] {
        &self.perm
    }

    pub fn image(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// +1 or -1.
    pub fn sign(&self) -> i64 {
        let mut inv = 0;
        for i in 0..self.perm.len() {
            for j in i + 1..self.perm.len() {
                if self.perm[i] > self.perm[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Position of σ in the lexicographic list from [`fixed_points`].
    pub fn index(&self) -> usize {
        let n = self.perm.len();
        let mut idx = 0;
        for i in 0..n {
            let smaller = self.perm[i + 1..]
                .iter()
                .filter(|&&x| x < self.perm[i])
                .count();
            idx = idx * (n - i) + smaller;
        }
        idx
    }
}

/// All (r+1)! fixed points in lexicographic order.
pub fn fixed_points(r: usize) -> Result<Vec<FlagFixedPoint>> {
    if r < 1 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    let mut cur: Vec<usize> = (0..=r).collect();
    let mut out = vec![FlagFixedPoint { perm: cur.clone() }];
    // next_permutation
    loop {
        let n = cur.len();
        let mut i = n - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(FlagFixedPoint { perm: cur.clone() });
    }
    Ok(out)
}

/// `Λ_j` for rank `r`, with `Λ_0 = (Λ_1⋯Λ_r)^{-1}`.
pub fn lambda(j: usize, r: usize) -> Monomial {
    assert!(j <= r);
    if j == 0 {
        Monomial::from_exponents(core::iter::once(0).chain((1..=r).map(|_| -1)).collect())
    } else {
        Monomial::lambda(j, 1)
    }
}

/// `Λ_0^{-1} + ... + Λ_r^{-1}`.
pub fn inverse_lambda_sum(r: usize) -> MPoly {
    MPoly::from_terms((0..=r).map(|j| (lambda(j, r).inv(), num_rational::BigRational::from_integer(1.into()))))
}

/// `p_i|_σ = (Λ_{σ(0)}⋯Λ_{σ(i-1)})^{-1}` for `0 <= i <= r+1`
/// (`p_0 = p_{r+1} = 1`).
pub fn restrict_p(sigma: &FlagFixedPoint, i: usize) -> Result<Monomial> {
    let r = sigma.rank();
    if i > r + 1 {
        return Err(Error::Domain(alloc::format!("p_{} out of range for rank {}", i, r)));
    }
    let mut m = Monomial::one();
    for k in 0..i {
        m = m.mul(&lambda(sigma.image(k), r));
    }
    Ok(m.inv())
}

/// `x_i|_σ = (p_{i-1}^{-1} p_i)|_σ = Λ_{σ(i-1)}^{-1}`, `1 <= i <= r+1`.
pub fn restrict_x(sigma: &FlagFixedPoint, i: usize) -> Monomial {
    lambda(sigma.image(i - 1), sigma.rank()).inv()
}

/// Restriction of `p^z = p_1^{z_1}⋯p_r^{z_r}`.
pub fn restrict_monomial(sigma: &FlagFixedPoint, z: &[i32]) -> Result<Monomial> {
    if z.len() != sigma.rank() {
        return Err(Error::RankMismatch(z.len(), sigma.rank()));
    }
    let mut m = Monomial::one();
    for (i, &zi) in z.iter().enumerate() {
        if zi != 0 {
            m = m.mul(&restrict_p(sigma, i + 1)?.pow(zi));
        }
    }
    Ok(m)
}

/// `{Λ_{σ(j)} Λ_{σ(i)}^{-1} : i < j}`.
pub fn tangent_weights(sigma: &FlagFixedPoint) -> Vec<Monomial> {
    let r = sigma.rank();
    let mut out = Vec::with_capacity(r * (r + 1) / 2);
    for i in 0..=r {
        for j in i + 1..=r {
            out.push(lambda(sigma.image(j), r).div(&lambda(sigma.image(i), r)));
        }
    }
    out
}

/// Values at every fixed point, in [`fixed_points`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizedClass {
    rank: usize,
    values: Vec<RatFunc>,
}

impl LocalizedClass {
    pub fn from_fn(r: usize, mut f: impl FnMut(&FlagFixedPoint) -> RatFunc) -> Result<Self> {
        let values = fixed_points(r)?.iter().map(&mut f).collect();
        Ok(LocalizedClass { rank: r, values })
    }

    pub fn try_from_fn(
        r: usize,
        mut f: impl FnMut(&FlagFixedPoint) -> Result<RatFunc>,
    ) -> Result<Self> {
        let values = fixed_points(r)?
            .iter()
            .map(&mut f)
            .collect::<Result<Vec<_>>>()?;
        Ok(LocalizedClass { rank: r, values })
    }

    pub fn from_values(r: usize, values: Vec<RatFunc>) -> Result<Self> {
        let n: usize = (1..=r + 1).product();
        if values.len() != n {
            return Err(Error::Domain(alloc::format!(
                "expected {} fixed-point values, got {}",
                n,
                values.len()
            )));
        }
        Ok(LocalizedClass { rank: r, values })
    }

    pub fn constant(r: usize, c: RatFunc) -> Result<Self> {
        Self::from_fn(r, |_| c.clone())
    }

    /// Restriction of `p^z`.
    pub fn p_power(r: usize, z: &[i32]) -> Result<Self> {
        Self::try_from_fn(r, |s| Ok(RatFunc::monomial(restrict_monomial(s, z)?)))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn values(&self) -> &[RatFunc] {
        &self.values
    }

    pub fn at(&self, sigma: &FlagFixedPoint) -> &RatFunc {
        &self.values[sigma.index()]
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(LocalizedClass {
            rank: self.rank,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        LocalizedClass {
            rank: self.rank,
            values: self.values.iter().map(f).collect(),
        }
    }
}

/// `Π_{0<=a<b<=r} (Λ_a - Λ_b)`.
fn vandermonde(r: usize) -> MPoly {
    let mut v = MPoly::one();
    for a in 0..=r {
        for b in a + 1..=r {
            let f = &MPoly::monomial(lambda(a, r)) - &MPoly::monomial(lambda(b, r));
            v = &v * &f;
        }
    }
    v
}

/// Atiyah–Bott sum `Σ_σ Φ^σ / Π_w (1 - w)` over the tangent weights `w`.
///
/// Uses `Π_{i<j}(1 - Λ_{σ(j)}/Λ_{σ(i)}) = sign(σ) Δ / Π_i Λ_{σ(i)}^{r-i}` with
/// `Δ` the Vandermonde product, so only one division is needed.
pub fn chi_flag(phi: &LocalizedClass) -> RatFunc {
    let r = phi.rank;
    let pts = fixed_points(r).expect("rank checked at construction");
    let terms: Vec<RatFunc> = pts
        .iter()
        .zip(&phi.values)
        .filter(|(_, v)| !v.is_zero())
        .map(|(s, v)| {
            let mut m = Monomial::one();
            for i in 0..=r {
                m = m.mul(&lambda(s.image(i), r).pow((r - i) as i32));
            }
            let t = v.mul_monomial(&m);
            if s.sign() < 0 {
                -t
            } else {
                t
            }
        })
        .collect();
    let total = RatFunc::sum(terms);
    if total.is_zero() {
        return total;
    }
    total
        .checked_div(&RatFunc::from_poly(vandermonde(r)))
        .expect("Vandermonde product is nonzero")
}

/// `χ(Φ ⊗ Ψ)`.
pub fn pairing(phi: &LocalizedClass, psi: &LocalizedClass) -> Result<RatFunc> {
    Ok(chi_flag(&phi.pointwise_mul(psi)?))
}

/// Character of the irreducible SU(r+1) representation with highest weight
/// `Σ z_i ω_i`, as the Schur polynomial `s_λ(Λ_0..Λ_r)` with
/// `λ_k = z_{k+1} + ... + z_r`, computed as a ratio of alternants.
pub fn weyl_character(r: usize, z: &[i32]) -> Result<MPoly> {
    if r < 1 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    if z.len() != r {
        return Err(Error::RankMismatch(z.len(), r));
    }
    if z.iter().any(|&x| x < 0) {
        return Err(Error::Domain(alloc::format!("{:?} is not dominant", z)));
    }
    let lam: Vec<i32> = (0..=r).map(|k| z[k..].iter().sum()).collect();
    let alternant = |shift: &dyn Fn(usize) -> i32| -> MPoly {
        let mut acc = MPoly::zero();
        for s in fixed_points(r).unwrap() {
            let mut m = Monomial::one();
            for k in 0..=r {
                m = m.mul(&lambda(s.image(k), r).pow(shift(k)));
            }
            acc.add_term(m, num_rational::BigRational::from_integer(s.sign().into()));
        }
        acc
    };
    let num = alternant(&|k| lam[k] + (r - k) as i32);
    let den = alternant(&|k| (r - k) as i32);
    num.exact_div(&den)
        .ok_or_else(|| Error::Domain("alternant ratio is not exact".into()))
}

/// Applies `Λ_j ↦ Λ_{π(j)}` (for all `0 <= j <= r`) to a rational function.
pub fn relabel_lambda(pi: &FlagFixedPoint, f: &RatFunc) -> RatFunc {
    let r = pi.rank();
    let mut images = alloc::vec![Monomial::q(1)];
    images.extend((1..=r).map(|i| lambda(pi.image(i), r)));
    f.map_monomials(|m| m.substitute(&images))
}

/// Sum of the coefficients (dimension of the representation for a character).
pub fn coefficient_sum(p: &MPoly) -> num_rational::BigRational {
    p.terms()
        .fold(num_rational::BigRational::zero(), |acc, (_, c)| acc + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn sigma(v: &[usize]) -> FlagFixedPoint {
        FlagFixedPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn counts_and_order() {
        let r1 = fixed_points(1).unwrap();
        assert_eq!(r1, vec![sigma(&[0, 1]), sigma(&[1, 0])]);
        assert_eq!(fixed_points(2).unwrap().len(), 6);
        assert_eq!(fixed_points(3).unwrap().len(), 24);
        assert!(fixed_points(0).is_err());
        for (k, s) in fixed_points(3).unwrap().iter().enumerate() {
            assert_eq!(s.index(), k);
        }
    }

    #[test]
    fn p_restrictions() {
        assert_eq!(restrict_p(&sigma(&[0, 1]), 1).unwrap(), lambda(0, 1).inv());
        assert_eq!(restrict_p(&sigma(&[0, 1, 2]), 2).unwrap(), lambda(2, 2));
        assert!(restrict_p(&sigma(&[0, 1]), 3).is_err());
    }

    #[test]
    fn x_classes_sum_to_inverse_lambdas() {
        for r in 1..=3 {
            for s in fixed_points(r).unwrap() {
                let mut sum = MPoly::zero();
                for i in 1..=r + 1 {
                    let x = restrict_p(&s, i - 1).unwrap().inv().mul(&restrict_p(&s, i).unwrap());
                    assert_eq!(x, restrict_x(&s, i));
                    sum = &sum + &MPoly::monomial(x);
                }
                assert_eq!(sum, inverse_lambda_sum(r));
            }
        }
    }

    #[test]
    fn distinct_restrictions_of_p1p2() {
        let vals: Vec<Monomial> = fixed_points(2)
            .unwrap()
            .iter()
            .map(|s| restrict_monomial(s, &[1, 1]).unwrap())
            .collect();
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                assert_ne!(vals[i], vals[j]);
            }
        }
    }

    #[test]
    fn weights() {
        assert_eq!(
            tangent_weights(&sigma(&[0, 1])),
            vec![lambda(1, 1).div(&lambda(0, 1))]
        );
        assert_eq!(tangent_weights(&FlagFixedPoint::identity(3)).len(), 6);
    }

    #[test]
    fn structure_sheaf() {
        for r in 1..=3 {
            let one = LocalizedClass::constant(r, RatFunc::one()).unwrap();
            assert!(chi_flag(&one).is_one());
        }
    }

    #[test]
    fn dual_hopf_class() {
        let r1 = LocalizedClass::p_power(1, &[-1]).unwrap();
        assert_eq!(
            chi_flag(&r1),
            RatFunc::from_poly(parse_poly("Λ1 + Λ1^-1").unwrap())
        );
        let r2 = LocalizedClass::p_power(2, &[-1, 0]).unwrap();
        assert_eq!(
            chi_flag(&r2),
            RatFunc::from_poly(parse_poly("Λ1 + Λ2 + Λ1^-1*Λ2^-1").unwrap())
        );
    }

    #[test]
    fn adjoint_character() {
        let c = weyl_character(2, &[1, 1]).unwrap();
        assert_eq!(c.len(), 7);
        assert_eq!(coefficient_sum(&c), num_rational::BigRational::from_integer(8.into()));
        assert!(weyl_character(2, &[-1, 0]).is_err());
        assert!(weyl_character(1, &[0]).unwrap().is_one());
    }
}
