//! Gaussian binomials, the finite `q`-binomial theorem, and the scalar image
//! of the quantized Serre relations.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::algebra::{MPoly, Monomial, RatFunc};
use crate::error::{Error, Result};

/// Polynomial in an auxiliary variable `x` with coefficients in `Q[q^±]`;
/// entry `k` is the coefficient of `x^k`.
pub type XPoly = Vec<MPoly>;

fn q_mono(k: i32) -> MPoly {
    MPoly::monomial(Monomial::q(k))
}

/// `Π_{i=1}^n (1 - b^i)` with `b = q^step`.
fn q_factorial(n: u32, step: i32) -> MPoly {
    (1..=n as i32).fold(MPoly::one(), |acc, i| &acc * &(&MPoly::one() - &q_mono(step * i)))
}

/// Gaussian binomial in base `q^step`, from the factorial quotient.
pub fn gaussian_binomial(m: u32, k: u32, step: i32) -> Result<MPoly> {
    if k > m {
        return Err(Error::Domain(alloc::format!("binomial ({m}, {k}) out of range")));
    }
    let den = &q_factorial(k, step) * &q_factorial(m - k, step);
    q_factorial(m, step)
        .exact_div(&den)
        .ok_or_else(|| Error::Domain("Gaussian quotient is not exact".into()))
}

/// `binom(m, k)_q = (1-q)⋯(1-q^m) / ((1-q)⋯(1-q^k) (1-q)⋯(1-q^{m-k}))`.
pub fn q_binomial(m: u32, k: u32) -> Result<RatFunc> {
    Ok(RatFunc::from_poly(gaussian_binomial(m, k, 1)?))
}

/// Oracle: `binom(m,k) = binom(m-1,k-1) + q^k binom(m-1,k)`.
pub fn q_binomial_pascal(m: u32, k: u32) -> MPoly {
    pascal_table(m, |_, k| q_mono(k as i32), |_, _| MPoly::one())[m as usize][k as usize].clone()
}

/// Oracle: `binom(m,k) = q^{m-k} binom(m-1,k-1) + binom(m-1,k)`.
pub fn q_binomial_pascal_dual(m: u32, k: u32) -> MPoly {
    pascal_table(m, |_, _| MPoly::one(), |m, k| q_mono((m - k) as i32))[m as usize][k as usize].clone()
}

fn pascal_table(
    m: u32,
    keep: impl Fn(u32, u32) -> MPoly,
    shift: impl Fn(u32, u32) -> MPoly,
) -> Vec<Vec<MPoly>> {
    let mut rows: Vec<Vec<MPoly>> = vec![vec![MPoly::one()]];
    for n in 1..=m {
        let prev = &rows[n as usize - 1];
        let mut row = vec![MPoly::zero(); n as usize + 1];
        for k in 0..=n {
            let mut v = MPoly::zero();
            if k >= 1 {
                v = &v + &(&shift(n, k) * &prev[k as usize - 1]);
            }
            if k < n {
                v = &v + &(&keep(n, k) * &prev[k as usize]);
            }
            row[k as usize] = v;
        }
        rows.push(row);
    }
    rows
}

fn xpoly_mul(a: &XPoly, b: &XPoly) -> XPoly {
    let mut out = vec![MPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Both sides of `Π_{i<m}(1 - b^i x) = Σ_k (-1)^k binom(m,k)_b b^{k(k-1)/2} x^k`
/// with `b = q^step`.
pub fn qbinom_sides(m: u32, step: i32) -> Result<(XPoly, XPoly)> {
    let mut lhs: XPoly = vec![MPoly::one()];
    for i in 0..m as i32 {
        lhs = xpoly_mul(&lhs, &vec![MPoly::one(), -q_mono(step * i)]);
    }
    let mut rhs = Vec::with_capacity(m as usize + 1);
    for k in 0..=m {
        let b = gaussian_binomial(m, k, step)?;
        let tri = (k * k.saturating_sub(1) / 2) as i32;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        rhs.push(b.mul_monomial(&Monomial::q(step * tri)).scale(&BigRational::from_integer(sign.into())));
    }
    Ok((lhs, rhs))
}

/// Symbolic check of the finite `q`-binomial theorem for one `m`.
pub fn verify_qbinom_identity(m: u32) -> Result<bool> {
    let (l, r) = qbinom_sides(m, 1)?;
    Ok(l == r)
}

/// Cartan data with the `m`-matrix offsets `m_{ji} - m_{ij}` that fix the
/// one-dimensional representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub rank: usize,
    pub cartan: Vec<Vec<i32>>,
    /// `(α_i, α_i) / 2`.
    pub symmetrizers: Vec<i32>,
    /// `offsets[j][i] = m_{ji} - m_{ij}`; antisymmetric.
    pub offsets: Vec<Vec<i32>>,
}

impl CartanData {
    /// Type `A_r` with edge `(i, i+1)` oriented by `orientation[i]`:
    /// `true` gives `m_{i+1,i} - m_{i,i+1} = +1`.
    pub fn type_a(rank: usize, orientation: &[bool]) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Domain("rank must be at least 1".into()));
        }
        if orientation.len() != rank - 1 {
            return Err(Error::RankMismatch(orientation.len(), rank - 1));
        }
        let mut cartan = vec![vec![0; rank]; rank];
        let mut offsets = vec![vec![0; rank]; rank];
        for i in 0..rank {
            cartan[i][i] = 2;
            if i + 1 < rank {
                cartan[i][i + 1] = -1;
                cartan[i + 1][i] = -1;
                let s = if orientation[i] { 1 } else { -1 };
                offsets[i + 1][i] = s;
                offsets[i][i + 1] = -s;
            }
        }
        Ok(CartanData {
            rank,
            cartan,
            symmetrizers: vec![1; rank],
            offsets,
        })
    }

    /// Every orientation of the `A_r` Dynkin diagram.
    pub fn all_type_a(rank: usize) -> Result<Vec<Self>> {
        let edges = rank.saturating_sub(1);
        (0u32..1 << edges)
            .map(|bits| {
                let o: Vec<bool> = (0..edges).map(|e| bits >> e & 1 == 1).collect();
                Self::type_a(rank, &o)
            })
            .collect()
    }

    /// Edges `(i, j)` with `i < j` and `a_{ij} ≠ 0`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                if self.cartan[i][j] != 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Exponent `e` with `x = q^e`, where
/// `x = q_i^{a_{ji} ± 2(m_{ji} - m_{ij})/(α_i,α_i)}` and `q_i = q^{s_i}`.
pub fn serre_exponent(cd: &CartanData, i: usize, j: usize, sign: i32) -> i32 {
    let s = cd.symmetrizers[i];
    s * cd.cartan[j][i] + sign * cd.offsets[j][i]
}

/// Scalar image of the Serre relation for `(i, j)`: with `n = 1 - a_{ji}`,
/// `Σ_k (-1)^k binom(n,k)_{q_i²} q_i^{k(k-1)} x^k` must vanish at `x = q^e`.
/// Also checks that `x` is one of the roots `q_i^{-2l}`, `0 <= l < n`.
pub fn serre_scalar_check(cd: &CartanData, i: usize, j: usize, sign: i32) -> Result<bool> {
    if i == j || i >= cd.rank || j >= cd.rank {
        return Err(Error::Domain(alloc::format!("bad node pair ({i}, {j})")));
    }
    let a = cd.cartan[j][i];
    let n = (1 - a) as u32;
    let s = cd.symmetrizers[i];
    let e = serre_exponent(cd, i, j, sign);
    let (_, rhs) = qbinom_sides(n, 2 * s)?;
    let value = rhs
        .iter()
        .enumerate()
        .fold(MPoly::zero(), |acc, (k, c)| &acc + &c.mul_monomial(&Monomial::q(e * k as i32)));
    let is_root = (0..n as i32).any(|l| e == -2 * s * l);
    Ok(value.is_zero() && is_root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn small_binomials() {
        assert!(q_binomial(5, 0).unwrap().is_one());
        assert_eq!(q_binomial(2, 1).unwrap().as_poly().unwrap(), &parse_poly("1 + q").unwrap());
        assert_eq!(
            q_binomial(4, 2).unwrap().as_poly().unwrap(),
            &parse_poly("1 + q + 2*q^2 + q^3 + q^4").unwrap()
        );
        assert!(q_binomial(2, 3).is_err());
    }

    #[test]
    fn pascal_oracles_agree() {
        for m in 0..=8 {
            for k in 0..=m {
                let b = gaussian_binomial(m, k, 1).unwrap();
                assert_eq!(q_binomial_pascal(m, k), b);
                assert_eq!(q_binomial_pascal_dual(m, k), b);
            }
        }
    }

    #[test]
    fn identity_small() {
        for m in 0..=4 {
            assert!(verify_qbinom_identity(m).unwrap());
        }
    }

    #[test]
    fn serre_examples() {
        let cd = CartanData::type_a(2, &[true]).unwrap();
        assert_eq!(serre_exponent(&cd, 0, 1, 1), 0);
        assert_eq!(serre_exponent(&cd, 0, 1, -1), -2);
        assert!(serre_scalar_check(&cd, 0, 1, 1).unwrap());
        assert!(serre_scalar_check(&cd, 0, 1, -1).unwrap());
        let cd3 = CartanData::type_a(3, &[true, false]).unwrap();
        assert!(serre_scalar_check(&cd3, 0, 2, 1).unwrap());
    }

    #[test]
    fn off_root_exponent_fails() {
        let mut cd = CartanData::type_a(2, &[true]).unwrap();
        cd.offsets[1][0] = 3;
        assert!(!serre_scalar_check(&cd, 0, 1, 1).unwrap());
    }
}
