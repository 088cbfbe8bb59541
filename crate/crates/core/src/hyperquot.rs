//! Torus fixed points of hyperquot schemes, the `q`-exponent `k_d` of their
//! equivariant canonical class, and the pole-gap estimate on J-coefficients.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flag::{fixed_points, FlagFixedPoint};
use crate::series::{DegreeVector, TwistedSeries};

/// Lower-triangular `r × r` matrix stored by rows; row `i` (0-based) has
/// `i + 1` entries.
pub type Triangle = Vec<Vec<u32>>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HQFixedPoint {
    pub sigma: FlagFixedPoint,
    pub delta_plus: Triangle,
    pub delta_minus: Triangle,
}

/// Checks nonnegativity (implicit), row monotonicity in each matrix and the
/// column sums `Σ_{i≥j} (m⁺_{ij} + m⁻_{ij}) = d_{r+1-j}`.
pub fn satisfies_constraints(r: usize, d: &DegreeVector, plus: &Triangle, minus: &Triangle) -> bool {
    let shaped = |t: &Triangle| t.len() == r && t.iter().enumerate().all(|(i, row)| row.len() == i + 1);
    if !shaped(plus) || !shaped(minus) {
        return false;
    }
    let monotone = |t: &Triangle| t.iter().all(|row| row.windows(2).all(|w| w[0] <= w[1]));
    if !monotone(plus) || !monotone(minus) {
        return false;
    }
    (0..r).all(|j| {
        let col: u32 = (j..r).map(|i| plus[i][j] + minus[i][j]).sum();
        col == d.entries()[r - 1 - j]
    })
}

/// Matrix pairs for one degree, built column by column from the last.
fn matrix_pairs(r: usize, d: &DegreeVector) -> Vec<(Triangle, Triangle)> {
    let mut out = Vec::new();
    let mut plus: Triangle = (0..r).map(|i| vec![0; i + 1]).collect();
    let mut minus = plus.clone();
    fill_column(r, d, r, &mut plus, &mut minus, &mut out);
    out.sort();
    out
}

// `col` counts down from r; column index j = col - 1.
fn fill_column(
    r: usize,
    d: &DegreeVector,
    col: usize,
    plus: &mut Triangle,
    minus: &mut Triangle,
    out: &mut Vec<(Triangle, Triangle)>,
) {
    if col == 0 {
        out.push((plus.clone(), minus.clone()));
        return;
    }
    let j = col - 1;
    let total = d.entries()[r - 1 - j];
    // slots: (row i, sign) for i = j..r; caps from the column to the right
    let slots: Vec<(usize, bool)> = (j..r).flat_map(|i| [(i, true), (i, false)]).collect();
    let caps: Vec<u32> = slots
        .iter()
        .map(|&(i, pos)| {
            if i == j {
                total
            } else if pos {
                plus[i][j + 1]
            } else {
                minus[i][j + 1]
            }
        })
        .collect();
    let mut vals = vec![0u32; slots.len()];
    distribute(total, &caps, 0, &mut vals, &mut |vals| {
        for (&(i, pos), &v) in slots.iter().zip(vals) {
            if pos {
                plus[i][j] = v;
            } else {
                minus[i][j] = v;
            }
        }
        fill_column(r, d, col - 1, plus, minus, out);
    });
}

fn distribute(left: u32, caps: &[u32], k: usize, vals: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if k == caps.len() {
        if left == 0 {
            f(vals);
        }
        return;
    }
    let room: u32 = caps[k + 1..].iter().sum();
    let lo = left.saturating_sub(room);
    for v in lo..=caps[k].min(left) {
        vals[k] = v;
        distribute(left - v, caps, k + 1, vals, f);
    }
}

/// All fixed points of `HQ_d`, sorted.
pub fn enumerate_hq_fixed_points(r: usize, d: &DegreeVector) -> Result<Vec<HQFixedPoint>> {
    if d.rank() != r {
        return Err(Error::RankMismatch(d.rank(), r));
    }
    let pairs = matrix_pairs(r, d);
    let mut out = Vec::with_capacity(pairs.len() * (1..=r + 1).product::<usize>());
    for s in fixed_points(r)? {
        for (p, m) in &pairs {
            out.push(HQFixedPoint {
                sigma: s.clone(),
                delta_plus: p.clone(),
                delta_minus: m.clone(),
            });
        }
    }
    out.sort();
    Ok(out)
}

/// Independent census: every triangle pair with entries in `0..=max d`,
/// filtered through [`satisfies_constraints`].
pub fn brute_force_hq_fixed_points(r: usize, d: &DegreeVector) -> Result<Vec<HQFixedPoint>> {
    if d.rank() != r {
        return Err(Error::RankMismatch(d.rank(), r));
    }
    let bound = d.entries().iter().copied().max().unwrap_or(0);
    let cells = r * (r + 1);
    let mut entries = vec![0u32; cells];
    let mut pairs = Vec::new();
    loop {
        let mut it = entries.iter().copied();
        let mut take = || -> Triangle { (0..r).map(|i| (0..=i).map(|_| it.next().unwrap()).collect()).collect() };
        let plus = take();
        let minus = take();
        if satisfies_constraints(r, d, &plus, &minus) {
            pairs.push((plus, minus));
        }
        let mut k = 0;
        loop {
            if k == cells {
                let mut out = Vec::new();
                for s in fixed_points(r)? {
                    for (p, m) in &pairs {
                        out.push(HQFixedPoint {
                            sigma: s.clone(),
                            delta_plus: p.clone(),
                            delta_minus: m.clone(),
                        });
                    }
                }
                out.sort();
                return Ok(out);
            }
            if entries[k] < bound {
                entries[k] += 1;
                break;
            }
            entries[k] = 0;
            k += 1;
        }
    }
}

/// `k_d = |d| + Σ_{i=1}^{r+1} (d_i - d_{i-1})² / 2` with `d_0 = d_{r+1} = 0`.
pub fn k_d(d: &DegreeVector) -> u64 {
    let r = d.rank();
    let sq: i64 = (1..=r + 1)
        .map(|i| {
            let x = d.get(i) - d.get(i - 1);
            x * x
        })
        .sum();
    d.total() as u64 + (sq / 2) as u64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalClassData {
    pub k_d: u64,
    /// Exponent of `P_i`: `2 - d_{i-1} + 2 d_i - d_{i+1}`.
    pub p_exponents: Vec<i64>,
}

pub fn canonical_exponents(d: &DegreeVector) -> CanonicalClassData {
    let r = d.rank();
    CanonicalClassData {
        k_d: k_d(d),
        p_exponents: (1..=r)
            .map(|i| 2 - d.get(i - 1) + 2 * d.get(i) - d.get(i + 1))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleGapRow {
    pub sigma: Vec<usize>,
    pub degree: Vec<u32>,
    pub gap: i32,
    pub k_d: u64,
}

impl PoleGapRow {
    pub fn margin(&self) -> i64 {
        self.gap as i64 - self.k_d as i64
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PoleGapReport {
    pub rows: Vec<PoleGapRow>,
}

impl PoleGapReport {
    pub fn passed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.margin() >= 0)
    }

    /// Every row attains the bound.
    pub fn sharp(&self) -> bool {
        self.rows.iter().all(|r| r.margin() == 0)
    }
}

/// `deg_q den - deg_q num` of every `J_d^σ`, against `k_d`.
pub fn verify_pole_gap(series: &TwistedSeries) -> Result<PoleGapReport> {
    let pts = fixed_points(series.rank())?;
    let mut rows = Vec::new();
    for (d, cls) in series.coefficients() {
        let k = k_d(d);
        for s in &pts {
            rows.push(PoleGapRow {
                sigma: s.images().to_vec(),
                degree: d.entries().to_vec(),
                gap: cls.at(s).q_degree_gap()?,
                k_d: k,
            });
        }
    }
    Ok(PoleGapReport { rows })
}
