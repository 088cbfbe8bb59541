//! Multivariate gcd over Q via modular images and Chinese remaindering.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::modp::{self, dense, Exps, ModPoly, PrimeSeq, Rng};
use super::poly::{MPoly, Monomial};

/// Integer polynomial on a compressed variable list.
struct IntPoly {
    terms: Vec<(Exps, BigInt)>,
}

impl IntPoly {
    fn lc(&self) -> &BigInt {
        &self.terms.iter().max_by(|a, b| a.0.cmp(&b.0)).unwrap().1
    }

    fn reduce(&self, n: usize, p: u64) -> ModPoly {
        let bp = BigInt::from(p);
        let mut t = BTreeMap::new();
        for (e, c) in &self.terms {
            let r = c.mod_floor(&bp).to_u64().unwrap();
            if r != 0 {
                t.insert(e.clone(), r);
            }
        }
        ModPoly { n, terms: t }
    }
}

fn big_mod(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Strips the monomial content, leaving a genuine polynomial with no
/// monomial factor.
pub(crate) fn strip_monomial(a: &MPoly) -> MPoly {
    let m = a.min_monomial();
    if m.is_one() {
        a.clone()
    } else {
        a.mul_monomial(&m.inv())
    }
}

/// Primitive integer representative: positive leading coefficient, integral
/// coprime coefficients, no monomial factor.
pub(crate) fn normalize(a: &MPoly) -> MPoly {
    if a.is_zero() {
        return MPoly::zero();
    }
    let s = strip_monomial(a);
    s.scale(&s.content().recip())
}

/// Greatest common divisor in the Laurent ring, normalized as in
/// [`normalize`]; `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    let a = normalize(a);
    let b = normalize(b);
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a == b {
        return a;
    }

    // Variables in both come first; one-sided variables are evaluated first
    // by the recursion and cost a single point each.
    let width = a.width().max(b.width());
    let mut vars: Vec<usize> = Vec::new();
    let mut tail: Vec<usize> = Vec::new();
    let mut common = Vec::new();
    for v in 0..width {
        match (a.uses_var(v), b.uses_var(v)) {
            (true, true) => {
                vars.push(v);
                common.push(v);
            }
            (false, false) => {}
            _ => tail.push(v),
        }
    }
    if common.is_empty() {
        return MPoly::one();
    }
    vars.extend(tail);
    let n = vars.len();
    let to_int = |p: &MPoly| IntPoly {
        terms: p
            .terms()
            .map(|(m, c)| {
                let e: Exps = vars.iter().map(|&v| m.exp(v) as u32).collect();
                (e, c.to_integer())
            })
            .collect(),
    };
    let ia = to_int(&a);
    let ib = to_int(&b);

    let mut rng = Rng::new(0x5eed_1234_abcd_0001);
    let mut primes = PrimeSeq::new();

    if coprime_pretest(&ia, &ib, n, common.len(), &mut primes, &mut rng) {
        return MPoly::one();
    }

    let lca = ia.lc().clone();
    let lcb = ib.lc().clone();
    let gamma = lca.gcd(&lcb);

    let mut acc: Option<(BTreeMap<Exps, BigInt>, BigInt, Exps)> = None;
    for p in primes {
        if big_mod(&lca, p) == 0 || big_mod(&lcb, p) == 0 {
            continue;
        }
        let ap = ia.reduce(n, p);
        let bp = ib.reduce(n, p);
        let gp = match modp::pgcd(&ap, &bp, p, &mut rng) {
            Some(g) => g,
            None => continue,
        };
        if gp.is_constant() {
            return MPoly::one();
        }
        let gp = gp.scale(big_mod(&gamma, p), p);
        let lm = gp.lm().unwrap().clone();
        let (changed, state) = match acc.take() {
            None => (true, start_crt(&gp, p, lm)),
            Some(state) => match lm.cmp(&state.2) {
                core::cmp::Ordering::Less => (true, start_crt(&gp, p, lm)),
                core::cmp::Ordering::Greater => {
                    acc = Some(state);
                    continue;
                }
                core::cmp::Ordering::Equal => combine_crt(state, &gp, p),
            },
        };
        if !changed {
            let cand = from_int(&state.0, &vars);
            let cand = normalize(&cand);
            if a.exact_div(&cand).is_some() && b.exact_div(&cand).is_some() {
                return cand;
            }
        }
        acc = Some(state);
    }
    unreachable!("prime sequence exhausted")
}

type CrtState = (BTreeMap<Exps, BigInt>, BigInt, Exps);

fn start_crt(gp: &ModPoly, p: u64, lm: Exps) -> CrtState {
    let half = p / 2;
    let map = gp
        .terms
        .iter()
        .map(|(e, &c)| {
            let v = if c > half {
                BigInt::from(c) - BigInt::from(p)
            } else {
                BigInt::from(c)
            };
            (e.clone(), v)
        })
        .collect();
    (map, BigInt::from(p), lm)
}

/// Returns whether any coefficient changed, and the combined state.
fn combine_crt(state: CrtState, gp: &ModPoly, p: u64) -> (bool, CrtState) {
    let (mut map, m, lm) = state;
    let m_mod = big_mod(&m, p);
    let m_inv = modp::inv_mod(m_mod, p);
    let new_m = &m * BigInt::from(p);
    let half: BigInt = &new_m / 2;
    let mut keys: Vec<Exps> = map.keys().cloned().collect();
    for k in gp.terms.keys() {
        if !map.contains_key(k) {
            keys.push(k.clone());
        }
    }
    let mut changed = false;
    for k in keys {
        let cur = map.get(&k).cloned().unwrap_or_else(BigInt::zero);
        let target = gp.terms.get(&k).copied().unwrap_or(0);
        let t = modp::mul_mod(modp::sub_mod(target, big_mod(&cur, p), p), m_inv, p);
        if t == 0 {
            continue;
        }
        changed = true;
        let mut v = cur + &m * BigInt::from(t);
        if v > half {
            v -= &new_m;
        }
        if v.is_zero() {
            map.remove(&k);
        } else {
            map.insert(k, v);
        }
    }
    (changed, (map, new_m, lm))
}

fn from_int(map: &BTreeMap<Exps, BigInt>, vars: &[usize]) -> MPoly {
    let width = vars.iter().copied().max().map_or(0, |v| v + 1);
    MPoly::from_terms(map.iter().map(|(e, c)| {
        let mut ex = alloc::vec![0i32; width];
        for (i, &v) in vars.iter().enumerate() {
            ex[v] = e[i] as i32;
        }
        (
            Monomial::from_exponents(ex),
            BigRational::from_integer(c.clone()),
        )
    }))
}

/// Sound coprimality certificate: for every shared variable `x`, evaluate
/// the others at a random point mod `p`; if the leading coefficient in `x`
/// survives and the univariate images are coprime, the gcd has degree 0 in
/// `x`.
fn coprime_pretest(
    a: &IntPoly,
    b: &IntPoly,
    n: usize,
    ncommon: usize,
    primes: &mut PrimeSeq,
    rng: &mut Rng,
) -> bool {
    let p = primes.next().unwrap();
    let ap = a.reduce(n, p);
    let bp = b.reduce(n, p);
    let pt: Vec<u64> = (0..n).map(|_| rng.point(p)).collect();
    for x in 0..ncommon {
        let image = |f: &ModPoly| -> (Vec<u64>, usize) {
            let mut d: Vec<u64> = Vec::new();
            let mut deg = 0usize;
            for (e, &c) in &f.terms {
                let mut v = c;
                for (i, &ei) in e.iter().enumerate() {
                    if i != x && ei != 0 {
                        v = modp::mul_mod(v, modp::pow_mod(pt[i], ei as u64, p), p);
                    }
                }
                let k = e[x] as usize;
                deg = deg.max(k);
                if d.len() <= k {
                    d.resize(k + 1, 0);
                }
                d[k] = modp::add_mod(d[k], v, p);
            }
            dense::trim(&mut d);
            (d, deg)
        };
        let (da, dega) = image(&ap);
        let (db, degb) = image(&bp);
        let keeps = dense::degree(&da) == Some(dega) || dense::degree(&db) == Some(degb);
        if !keeps || da.is_empty() || db.is_empty() {
            return false;
        }
        if dense::gcd(&da, &db, p).len() != 1 {
            return false;
        }
    }
    true
}

/// `a / gcd(a, b)` and `b / gcd(a, b)` together with the gcd.
pub(crate) fn cofactors(a: &MPoly, b: &MPoly) -> (MPoly, MPoly, MPoly) {
    let g = poly_gcd(a, b);
    if g.is_one() {
        return (g, a.clone(), b.clone());
    }
    let ca = a.exact_div(&g).expect("gcd divides");
    let cb = b.exact_div(&g).expect("gcd divides");
    (g, ca, cb)
}
