//! Equivariant Euler characteristics of quasimap projective spaces, the
//! factorized generating function `𝒢`, and its rank-2 double residue.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::algebra::{MPoly, Monomial, RatFunc};
use crate::error::{Error, Result};
use crate::flag::{chi_flag, lambda, restrict_monomial, LocalizedClass};
use crate::series::{
    degrees_up_to, solve_jseries_with, DegreeVector, QDirection, SolveOptions, TwistedSeries,
};

/// Torus weights `w_f` of a vector space `V`; `P(V)` has one fixed point per
/// weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedProjectiveData {
    weights: Vec<Monomial>,
}

impl WeightedProjectiveData {
    pub fn new(weights: Vec<Monomial>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Domain("empty weight list".into()));
        }
        for (i, w) in weights.iter().enumerate() {
            if weights[..i].contains(w) {
                return Err(Error::HigherOrderPole(alloc::format!("repeated weight {}", w)));
            }
        }
        Ok(WeightedProjectiveData { weights })
    }

    pub fn weights(&self) -> &[Monomial] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Weights `Λ_j q^{-m}` (`m` outer, `j` inner) of the quasimap space of
/// degree `d` to `CP^r`.
pub fn quasimap_weights(r: usize, d: u32) -> Result<WeightedProjectiveData> {
    if r == 0 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    weights_with(r, d, 1)
}

fn weights_with(r: usize, d: u32, lambda_sign: i32) -> Result<WeightedProjectiveData> {
    let mut w = Vec::with_capacity((r + 1) * (d as usize + 1));
    for m in 0..=d {
        for j in 0..=r {
            w.push(lambda(j, r).pow(lambda_sign).mul(&Monomial::q(-(m as i32))));
        }
    }
    WeightedProjectiveData::new(w)
}

/// `Σ_f w_f^{-z} / Π_{g≠f} (1 - w_g/w_f)`.
///
/// Multiplying through by `w_f^{N-1}` turns the sum into the divided
/// difference of `x^{N-1-z}` at the weights, evaluated by Newton's table so
/// that every step is an exact Laurent division.
pub fn chi_projective(wd: &WeightedProjectiveData, z: i32) -> Result<RatFunc> {
    let w = wd.weights();
    let n = w.len();
    let e = n as i32 - 1 - z;
    let mut table: Vec<MPoly> = w.iter().map(|x| MPoly::monomial(x.pow(e))).collect();
    for level in 1..n {
        for i in 0..n - level {
            let diff = &table[i + 1] - &table[i];
            let gap = &MPoly::monomial(w[i + level].clone()) - &MPoly::monomial(w[i].clone());
            table[i] = diff
                .exact_div(&gap)
                .ok_or_else(|| Error::Domain("divided difference is not exact".into()))?;
        }
    }
    Ok(RatFunc::from_poly(table.swap_remove(0)))
}

/// `h_z` of the weights by enumerating multisets: the character of
/// `Sym^z V`, which equals `chi_projective(wd, -z)`.
pub fn symmetric_h_oracle(wd: &WeightedProjectiveData, z: i32) -> Result<MPoly> {
    if z < 0 {
        return Err(Error::Domain("symmetric power of negative degree".into()));
    }
    let w = wd.weights();
    let mut out = MPoly::zero();
    let mut idx = alloc::vec![0usize; z as usize];
    loop {
        let m = idx.iter().fold(Monomial::one(), |acc, &i| acc.mul(&w[i]));
        out.add_term(m, BigRational::from_integer(1.into()));
        // next nondecreasing index tuple
        let mut k = idx.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if idx[k] + 1 < w.len() {
                let v = idx[k] + 1;
                for slot in &mut idx[k..] {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// Coefficients of `𝒢` from a solved pair `J(q)`, `J(q^{-1})`:
/// `[Q^d] = χ(Σ_{d⁺+d⁻=d} q^{z·d⁺} J_{d⁺}(q) J_{d⁻}(q^{-1}) p^z)`.
pub fn genfun_from_series(
    forward: &TwistedSeries,
    inverted: &TwistedSeries,
    z: &[i32],
) -> Result<BTreeMap<DegreeVector, RatFunc>> {
    let r = forward.rank();
    if inverted.rank() != r {
        return Err(Error::RankMismatch(inverted.rank(), r));
    }
    if z.len() != r {
        return Err(Error::RankMismatch(z.len(), r));
    }
    let trunc = forward.truncation().min(inverted.truncation());
    let pz = LocalizedClass::p_power(r, z)?;
    let mut out = BTreeMap::new();
    for d in degrees_up_to(r, trunc) {
        let splits = degrees_up_to(r, d.total())
            .into_iter()
            .filter(|a| a.entries().iter().zip(d.entries()).all(|(x, y)| x <= y))
            .collect::<Vec<_>>();
        let cls = LocalizedClass::try_from_fn(r, |s| {
            let mut parts = Vec::with_capacity(splits.len());
            for plus in &splits {
                let minus = DegreeVector::new(
                    d.entries().iter().zip(plus.entries()).map(|(x, y)| x - y).collect(),
                );
                let twist: i32 = z
                    .iter()
                    .zip(plus.entries())
                    .map(|(zi, di)| zi * *di as i32)
                    .sum();
                let a = forward.value(plus, s).expect("within truncation");
                let b = inverted.value(&minus, s).expect("within truncation");
                parts.push((a * b).mul_monomial(&Monomial::q(twist)));
            }
            Ok(&RatFunc::sum(parts) * pz.at(s))
        })?;
        out.insert(d, chi_flag(&cls));
    }
    Ok(out)
}

/// Coefficients of `𝒢` for `|d| <= truncation`.
#[allow(non_snake_case)]
pub fn genfun_G(r: usize, z: &[i32], truncation: u32) -> Result<BTreeMap<DegreeVector, RatFunc>> {
    let fwd = solve_jseries_with(r, truncation, SolveOptions::default())?;
    let inv = solve_jseries_with(
        r,
        truncation,
        SolveOptions {
            direction: QDirection::Inverted,
            ..SolveOptions::default()
        },
    )?;
    genfun_from_series(&fwd, &inv, z)
}

/// Coefficients `c_k` of `Π_{m=m0}^{top} (1 - X q^{-m}) = Σ_k c_k X^k`.
fn numerator_coefficients(m0: u32, top: u32) -> Vec<MPoly> {
    let mut c = alloc::vec![MPoly::one()];
    for m in m0..=top {
        let f = MPoly::monomial(Monomial::q(-(m as i32)));
        let mut next = alloc::vec![MPoly::zero(); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k] = &next[k] + ck;
            next[k + 1] = &next[k + 1] - &(ck * &f);
        }
        c = next;
    }
    c
}

/// Rank-2 double residue with numerator `Π_{m=m0}^{d_1+d_2}(1 - P_1P_2q^{-m})`.
///
/// Expanding the numerator in `P_1P_2` splits the integral into products of
/// one-variable residue sums over `{Λ_j q^{-m}}` and `{Λ_j^{-1} q^{-m}}`.
#[allow(non_snake_case)]
pub fn residue_G_r2_with_start(z: &[i32], d: &DegreeVector, m0: u32) -> Result<RatFunc> {
    if z.len() != 2 {
        return Err(Error::RankMismatch(z.len(), 2));
    }
    if d.rank() != 2 {
        return Err(Error::RankMismatch(d.rank(), 2));
    }
    let (d1, d2) = (d.entries()[0], d.entries()[1]);
    let w1 = weights_with(2, d1, 1)?;
    let w2 = weights_with(2, d2, -1)?;
    let mut parts = Vec::new();
    for (k, ck) in numerator_coefficients(m0, d1 + d2).iter().enumerate() {
        if ck.is_zero() {
            continue;
        }
        let k = k as i32;
        let a = chi_projective(&w1, z[0] + k)?;
        if a.is_zero() {
            continue;
        }
        let b = chi_projective(&w2, z[1] + k)?;
        parts.push((&a * &b).mul_poly(ck));
    }
    Ok(RatFunc::sum(parts))
}

/// The adopted convention: the numerator starts at `m = 0`.
#[allow(non_snake_case)]
pub fn residue_G_r2(z: &[i32], d: &DegreeVector) -> Result<RatFunc> {
    residue_G_r2_with_start(z, d, RESIDUE_NUMERATOR_START)
}

/// First index of the rank-2 residue numerator.
pub const RESIDUE_NUMERATOR_START: u32 = 0;

/// `χ(p^z)` on the flag manifold, read from fixed points.
pub fn chi_line_bundle(r: usize, z: &[i32]) -> Result<RatFunc> {
    let cls = LocalizedClass::try_from_fn(r, |s| Ok(RatFunc::monomial(restrict_monomial(s, z)?)))?;
    Ok(chi_flag(&cls))
}
