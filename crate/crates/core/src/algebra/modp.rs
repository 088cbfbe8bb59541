//! Arithmetic modulo word-sized primes: dense univariate polynomials, sparse
//! multivariate polynomials in lex order, and Brown's recursive dense gcd.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

pub(crate) type Exps = Vec<u32>;

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^62, in decreasing order.
pub(crate) struct PrimeSeq {
    next: u64,
}

impl PrimeSeq {
    pub(crate) fn new() -> Self {
        PrimeSeq { next: (1u64 << 62) - 1 }
    }
}

impl Iterator for PrimeSeq {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 3 {
            let n = self.next;
            self.next -= 2;
            if is_prime(n) {
                return Some(n);
            }
        }
        None
    }
}

/// splitmix64; evaluation points only need to avoid a thin bad set.
pub(crate) struct Rng(u64);

impl Rng {
    pub(crate) fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish value in `1..p`.
    pub(crate) fn point(&mut self, p: u64) -> u64 {
        1 + self.next_u64() % (p - 1)
    }
}

// ---------- dense univariate ----------

pub(crate) mod dense {
    use super::*;

    pub(crate) fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub(crate) fn degree(v: &[u64]) -> Option<usize> {
        if v.is_empty() {
            None
        } else {
            Some(v.len() - 1)
        }
    }

    pub(crate) fn eval(v: &[u64], x: u64, p: u64) -> u64 {
        v.iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
    }

    pub(crate) fn scale(v: &[u64], c: u64, p: u64) -> Vec<u64> {
        if c == 0 {
            return Vec::new();
        }
        v.iter().map(|&x| mul_mod(x, c, p)).collect()
    }

    pub(crate) fn monic(v: &[u64], p: u64) -> Vec<u64> {
        match v.last() {
            None => Vec::new(),
            Some(&lc) => scale(v, inv_mod(lc, p), p),
        }
    }

    pub(crate) fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                add_mod(
                    a.get(i).copied().unwrap_or(0),
                    b.get(i).copied().unwrap_or(0),
                    p,
                )
            })
            .collect();
        trim(&mut out);
        out
    }

    #[cfg(test)]
    pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
            }
        }
        trim(&mut out);
        out
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub(crate) fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let db = b.len() - 1;
        let inv = inv_mod(b[db], p);
        let mut r = a.to_vec();
        trim(&mut r);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; r.len() - db];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = mul_mod(*r.last().unwrap(), inv, p);
            q[shift] = c;
            for (j, &y) in b.iter().enumerate() {
                r[shift + j] = sub_mod(r[shift + j], mul_mod(c, y, p), p);
            }
            trim(&mut r);
        }
        trim(&mut q);
        (q, r)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let (_, r) = divrem(&x, &y, p);
            x = y;
            y = r;
        }
        monic(&x, p)
    }

    /// `(v - alpha)` times `m`.
    pub(crate) fn mul_linear(m: &[u64], alpha: u64, p: u64) -> Vec<u64> {
        let mut out = vec![0u64; m.len() + 1];
        for (i, &c) in m.iter().enumerate() {
            out[i + 1] = add_mod(out[i + 1], c, p);
            out[i] = sub_mod(out[i], mul_mod(c, alpha, p), p);
        }
        trim(&mut out);
        out
    }
}

// ---------- sparse multivariate ----------

/// Sparse polynomial mod `p` in `n` variables; map order is lex with
/// variable 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ModPoly {
    pub(crate) n: usize,
    pub(crate) terms: BTreeMap<Exps, u64>,
}

impl ModPoly {
    pub(crate) fn zero(n: usize) -> Self {
        ModPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn constant(n: usize, c: u64) -> Self {
        let mut t = BTreeMap::new();
        if c != 0 {
            t.insert(vec![0; n], c);
        }
        ModPoly { n, terms: t }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0)
    }

    pub(crate) fn lm(&self) -> Option<&Exps> {
        self.terms.keys().next_back()
    }

    pub(crate) fn lc(&self) -> u64 {
        self.terms.values().next_back().copied().unwrap_or(0)
    }

    pub(crate) fn scale(&self, c: u64, p: u64) -> ModPoly {
        if c == 0 {
            return ModPoly::zero(self.n);
        }
        ModPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, &v)| (k.clone(), mul_mod(v, c, p)))
                .collect(),
        }
    }

    pub(crate) fn monic(&self, p: u64) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lc(), p), p)
    }

    fn to_dense(&self) -> Vec<u64> {
        debug_assert_eq!(self.n, 1);
        let deg = self.terms.keys().map(|e| e[0] as usize).max().unwrap_or(0);
        let mut v = vec![0u64; deg + 1];
        for (e, &c) in &self.terms {
            v[e[0] as usize] = c;
        }
        dense::trim(&mut v);
        v
    }

    fn from_dense(v: &[u64]) -> ModPoly {
        let mut t = BTreeMap::new();
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                t.insert(vec![i as u32], c);
            }
        }
        ModPoly { n: 1, terms: t }
    }

    /// Coefficients in the last variable, keyed by the remaining exponents.
    fn split_last(&self) -> BTreeMap<Exps, Vec<u64>> {
        let k = self.n - 1;
        let mut out: BTreeMap<Exps, Vec<u64>> = BTreeMap::new();
        for (e, &c) in &self.terms {
            let d = out.entry(e[..k].to_vec()).or_default();
            let i = e[k] as usize;
            if d.len() <= i {
                d.resize(i + 1, 0);
            }
            d[i] = c;
        }
        out
    }

    fn join_last(n: usize, parts: &BTreeMap<Exps, Vec<u64>>) -> ModPoly {
        let mut t = BTreeMap::new();
        for (pre, d) in parts {
            for (i, &c) in d.iter().enumerate() {
                if c != 0 {
                    let mut e = pre.clone();
                    e.push(i as u32);
                    t.insert(e, c);
                }
            }
        }
        ModPoly { n, terms: t }
    }

    fn degree_last(&self) -> usize {
        self.terms.keys().map(|e| e[self.n - 1] as usize).max().unwrap_or(0)
    }

    /// Substitutes `alpha` for the last variable.
    pub(crate) fn eval_last(&self, alpha: u64, p: u64) -> ModPoly {
        let k = self.n - 1;
        let mut t: BTreeMap<Exps, u64> = BTreeMap::new();
        for (e, &c) in &self.terms {
            let v = mul_mod(c, pow_mod(alpha, e[k] as u64, p), p);
            let slot = t.entry(e[..k].to_vec()).or_insert(0);
            *slot = add_mod(*slot, v, p);
        }
        t.retain(|_, v| *v != 0);
        ModPoly { n: k, terms: t }
    }

    /// Exact divisibility test by repeated leading-term elimination.
    pub(crate) fn divisible_by(&self, d: &ModPoly, p: u64) -> bool {
        let (lmd, lcd) = match d.terms.iter().next_back() {
            Some((e, &c)) => (e.clone(), c),
            None => return false,
        };
        let inv = inv_mod(lcd, p);
        let mut rem = self.terms.clone();
        while let Some((m, &c)) = rem.iter().next_back() {
            if m.iter().zip(&lmd).any(|(a, b)| a < b) {
                return false;
            }
            let t: Exps = m.iter().zip(&lmd).map(|(a, b)| a - b).collect();
            let coef = mul_mod(c, inv, p);
            for (e, &x) in &d.terms {
                let key: Exps = e.iter().zip(&t).map(|(a, b)| a + b).collect();
                let sub = mul_mod(coef, x, p);
                let slot = rem.entry(key.clone()).or_insert(0);
                *slot = sub_mod(*slot, sub, p);
                if *slot == 0 {
                    rem.remove(&key);
                }
            }
        }
        true
    }
}

/// Monic (lex) gcd mod `p` by Brown's dense recursive algorithm.
/// Returns `None` if too many evaluation points were rejected.
pub(crate) fn pgcd(a: &ModPoly, b: &ModPoly, p: u64, rng: &mut Rng) -> Option<ModPoly> {
    let n = a.n;
    if a.is_zero() {
        return Some(b.monic(p));
    }
    if b.is_zero() {
        return Some(a.monic(p));
    }
    if n == 0 {
        return Some(ModPoly::constant(0, 1));
    }
    if n == 1 {
        let g = dense::gcd(&a.to_dense(), &b.to_dense(), p);
        return Some(ModPoly::from_dense(&g));
    }

    let k = n - 1;
    let sa = a.split_last();
    let sb = b.split_last();
    let content = |s: &BTreeMap<Exps, Vec<u64>>| {
        let mut g: Vec<u64> = Vec::new();
        for d in s.values() {
            g = dense::gcd(&g, d, p);
            if g.len() == 1 {
                break;
            }
        }
        g
    };
    let ca = content(&sa);
    let cb = content(&sb);
    let c = dense::gcd(&ca, &cb, p);
    let prim = |s: &BTreeMap<Exps, Vec<u64>>, cont: &[u64]| -> BTreeMap<Exps, Vec<u64>> {
        s.iter()
            .map(|(e, d)| (e.clone(), dense::divrem(d, cont, p).0))
            .collect()
    };
    let pa = prim(&sa, &ca);
    let pb = prim(&sb, &cb);
    let a1 = ModPoly::join_last(n, &pa);
    let b1 = ModPoly::join_last(n, &pb);
    let la = pa.values().next_back().unwrap().clone();
    let lb = pb.values().next_back().unwrap().clone();
    let g = dense::gcd(&la, &lb, p);
    let e = a1.degree_last().min(b1.degree_last());
    let limit = e + dense::degree(&g).unwrap_or(0);

    let c_poly = || {
        let mut t = BTreeMap::new();
        for (i, &x) in c.iter().enumerate() {
            if x != 0 {
                let mut ex = vec![0u32; k];
                ex.push(i as u32);
                t.insert(ex, x);
            }
        }
        ModPoly { n, terms: t }.monic(p)
    };

    let mut interp: Option<(BTreeMap<Exps, Vec<u64>>, Vec<u64>, Exps, usize)> = None;
    let cap = 4 * (limit + 1) + 32;
    let mut tries = 0;
    while tries < cap {
        tries += 1;
        let alpha = rng.point(p);
        if dense::eval(&g, alpha, p) == 0
            || dense::eval(&la, alpha, p) == 0
            || dense::eval(&lb, alpha, p) == 0
        {
            continue;
        }
        if let Some((_, m, _, _)) = &interp {
            if dense::eval(m, alpha, p) == 0 {
                continue;
            }
        }
        let ai = a1.eval_last(alpha, p);
        let bi = b1.eval_last(alpha, p);
        let gi = pgcd(&ai, &bi, p, rng)?;
        if gi.is_constant() {
            return Some(c_poly());
        }
        let gi = gi.scale(dense::eval(&g, alpha, p), p);
        let lm_i = gi.lm().unwrap().clone();

        let restart = match &interp {
            None => true,
            Some((_, _, lm, _)) => match lm_i.cmp(lm) {
                core::cmp::Ordering::Less => true,
                core::cmp::Ordering::Greater => continue,
                core::cmp::Ordering::Equal => false,
            },
        };
        if restart {
            let h: BTreeMap<Exps, Vec<u64>> =
                gi.terms.iter().map(|(e, &v)| (e.clone(), vec![v])).collect();
            interp = Some((h, vec![p - alpha, 1], lm_i, 1));
        } else {
            let (h, m, _, npts) = interp.as_mut().unwrap();
            let inv_m = inv_mod(dense::eval(m, alpha, p), p);
            let mut keys: Vec<Exps> = h.keys().cloned().collect();
            for key in gi.terms.keys() {
                if !h.contains_key(key) {
                    keys.push(key.clone());
                }
            }
            for key in keys {
                let target = gi.terms.get(&key).copied().unwrap_or(0);
                let cur = h.get(&key).map(|d| dense::eval(d, alpha, p)).unwrap_or(0);
                let delta = mul_mod(sub_mod(target, cur, p), inv_m, p);
                if delta == 0 {
                    continue;
                }
                let upd = dense::scale(m, delta, p);
                let entry = h.entry(key.clone()).or_default();
                *entry = dense::add(entry, &upd, p);
                if entry.is_empty() {
                    h.remove(&key);
                }
            }
            *m = dense::mul_linear(m, alpha, p);
            *npts += 1;
        }

        let (h, _, _, npts) = interp.as_ref().unwrap();
        if *npts > limit {
            let cont = content(h);
            let hp = prim(h, &cont);
            let cand = ModPoly::join_last(n, &hp);
            if a1.divisible_by(&cand, p) && b1.divisible_by(&cand, p) {
                let cp = ModPoly::join_last(n, &{
                    let mut m = BTreeMap::new();
                    m.insert(vec![0u32; k], c.clone());
                    m
                });
                return Some(mul(&cand, &cp, p).monic(p));
            }
            interp = None;
        }
    }
    None
}

pub(crate) fn mul(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let mut t: BTreeMap<Exps, u64> = BTreeMap::new();
    for (ea, &x) in &a.terms {
        for (eb, &y) in &b.terms {
            let key: Exps = ea.iter().zip(eb).map(|(u, v)| u + v).collect();
            let slot = t.entry(key).or_insert(0);
            *slot = add_mod(*slot, mul_mod(x, y, p), p);
        }
    }
    t.retain(|_, v| *v != 0);
    ModPoly { n: a.n, terms: t }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 1_000_000_007;

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = PrimeSeq::new().take(3).collect();
        assert!(ps.iter().all(|&p| is_prime(p) && p < (1 << 62)));
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(!is_prime(561));
        assert!(is_prime(P));
    }

    #[test]
    fn dense_gcd_finds_common_factor() {
        // (x-1)(x-2) and (x-1)(x+5)
        let a = dense::mul(&[P - 1, 1], &[P - 2, 1], P);
        let b = dense::mul(&[P - 1, 1], &[5, 1], P);
        assert_eq!(dense::gcd(&a, &b, P), vec![P - 1, 1]);
    }

    fn mp(n: usize, terms: &[(&[u32], u64)]) -> ModPoly {
        let mut t = BTreeMap::new();
        for (e, c) in terms {
            t.insert(e.to_vec(), *c);
        }
        ModPoly { n, terms: t }
    }

    #[test]
    fn bivariate_gcd() {
        // g = x + y + 1, a = g*(x - y), b = g*(x*y + 3)
        let g = mp(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[0, 0], 1)]);
        let f1 = mp(2, &[(&[1, 0], 1), (&[0, 1], P - 1)]);
        let f2 = mp(2, &[(&[1, 1], 1), (&[0, 0], 3)]);
        let a = mul(&g, &f1, P);
        let b = mul(&g, &f2, P);
        let mut rng = Rng::new(7);
        let h = pgcd(&a, &b, P, &mut rng).unwrap();
        assert_eq!(h, g.monic(P));
    }
}
