//! JSON schemas for series, operators and reports, with import and
//! golden-file comparison.

use std::collections::BTreeMap;

use qtoda_core::algebra::{parse_poly, parse_ratfunc, RatFunc};
use qtoda_core::conservation::EigenVerdict;
use qtoda_core::flag::{fixed_points, LocalizedClass};
use qtoda_core::hyperquot::HQFixedPoint;
use qtoda_core::operator::DifferenceOperator;
use qtoda_core::series::{DegreeVector, TwistedSeries};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub degree: Vec<u32>,
    pub sigma: Vec<usize>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub rank: usize,
    pub truncation: u32,
    pub coefficients: Vec<CellJson>,
}

impl SeriesJson {
    /// Cells ordered by degree, then by fixed point.
    pub fn from_series(s: &TwistedSeries) -> Self {
        let pts = fixed_points(s.rank()).expect("series rank is valid");
        let mut coefficients = Vec::new();
        for (d, cls) in s.coefficients() {
            for p in &pts {
                let v = cls.at(p);
                coefficients.push(CellJson {
                    degree: d.entries().to_vec(),
                    sigma: p.images().to_vec(),
                    num: v.num().to_string(),
                    den: v.den().to_string(),
                });
            }
        }
        SeriesJson {
            rank: s.rank(),
            truncation: s.truncation(),
            coefficients,
        }
    }

    pub fn to_series(&self) -> Result<TwistedSeries, String> {
        let r = self.rank;
        let pts = fixed_points(r).map_err(|e| e.to_string())?;
        let mut cells: BTreeMap<(Vec<u32>, Vec<usize>), RatFunc> = BTreeMap::new();
        for c in &self.coefficients {
            let num = parse_poly(&c.num).map_err(|e| format!("cell {:?} {:?}: {e}", c.degree, c.sigma))?;
            let den = parse_poly(&c.den).map_err(|e| format!("cell {:?} {:?}: {e}", c.degree, c.sigma))?;
            let v = RatFunc::new(num, den).map_err(|e| e.to_string())?;
            if cells.insert((c.degree.clone(), c.sigma.clone()), v).is_some() {
                return Err(format!("duplicate cell {:?} {:?}", c.degree, c.sigma));
            }
        }
        let mut coeffs = BTreeMap::new();
        for d in qtoda_core::series::degrees_up_to(r, self.truncation) {
            let mut vals = Vec::with_capacity(pts.len());
            for p in &pts {
                let key = (d.entries().to_vec(), p.images().to_vec());
                let v = cells
                    .remove(&key)
                    .ok_or_else(|| format!("missing cell {:?} {:?}", key.0, key.1))?;
                vals.push(v);
            }
            coeffs.insert(d, LocalizedClass::from_values(r, vals).map_err(|e| e.to_string())?);
        }
        if let Some(((d, s), _)) = cells.into_iter().next() {
            return Err(format!("unexpected cell {d:?} {s:?}"));
        }
        TwistedSeries::new(r, self.truncation, coeffs).map_err(|e| e.to_string())
    }
}

/// First cell where two series differ, as `(degree, sigma)`.
pub fn first_difference(expected: &TwistedSeries, actual: &TwistedSeries) -> Option<(Vec<u32>, Vec<usize>)> {
    if expected.rank() != actual.rank() || expected.truncation() != actual.truncation() {
        return Some((Vec::new(), Vec::new()));
    }
    let pts = fixed_points(expected.rank()).ok()?;
    for (d, cls) in expected.coefficients() {
        for p in &pts {
            if actual.value(d, p) != Some(cls.at(p)) {
                return Some((d.entries().to_vec(), p.images().to_vec()));
            }
        }
    }
    None
}

/// `Q1^a*Q2^b`, or `1` for the empty monomial.
pub fn q_monomial_key(a: &[i32]) -> String {
    let parts: Vec<String> = a
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| if e == 1 { format!("Q{}", i + 1) } else { format!("Q{}^{}", i + 1, e) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

pub fn parse_q_monomial_key(key: &str, rank: usize) -> Result<Vec<i32>, String> {
    let mut out = vec![0; rank];
    if key == "1" {
        return Ok(out);
    }
    for factor in key.split('*') {
        let (var, exp) = match factor.split_once('^') {
            Some((v, e)) => (v, e.parse::<i32>().map_err(|e| format!("{factor}: {e}"))?),
            None => (factor, 1),
        };
        let idx: usize = var
            .strip_prefix('Q')
            .and_then(|s| s.parse().ok())
            .filter(|&i| (1..=rank).contains(&i))
            .ok_or_else(|| format!("bad Q variable {var}"))?;
        out[idx - 1] += exp;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorTermJson {
    pub shift: Vec<i32>,
    pub coeff: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub rank: usize,
    pub terms: Vec<OperatorTermJson>,
}

impl OperatorJson {
    pub fn from_operator(op: &DifferenceOperator) -> Self {
        let terms = op
            .terms()
            .map(|(m, c)| OperatorTermJson {
                shift: m.clone(),
                coeff: c.iter().map(|(a, v)| (q_monomial_key(a), v.to_string())).collect(),
            })
            .collect();
        OperatorJson {
            rank: op.rank(),
            terms,
        }
    }

    pub fn to_operator(&self) -> Result<DifferenceOperator, String> {
        let mut op = DifferenceOperator::zero(self.rank);
        for t in &self.terms {
            if t.shift.len() != self.rank + 1 {
                return Err(format!("shift {:?} has the wrong length", t.shift));
            }
            for (k, v) in &t.coeff {
                let a = parse_q_monomial_key(k, self.rank)?;
                let c = parse_ratfunc(v).map_err(|e| e.to_string())?;
                op.add_term(t.shift.clone(), a, c);
            }
        }
        Ok(op)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerJson {
    pub degree: Vec<u32>,
    pub z: Vec<i32>,
    pub character: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRowJson {
    pub degree: Vec<u32>,
    pub sigma: Vec<usize>,
    pub delta_plus: Vec<Vec<u32>>,
    pub delta_minus: Vec<Vec<u32>>,
    pub k_d: u64,
    /// `q`-degree gap of `J_d^σ`.
    pub observed_gap: i32,
}

impl CensusRowJson {
    pub fn new(d: &DegreeVector, p: &HQFixedPoint, k_d: u64, gap: i32) -> Self {
        CensusRowJson {
            degree: d.entries().to_vec(),
            sigma: p.sigma.images().to_vec(),
            delta_plus: p.delta_plus.clone(),
            delta_minus: p.delta_minus.clone(),
            k_d,
            observed_gap: gap,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenJson {
    pub status: String,
    pub eigenvalue: Option<String>,
    pub checked_to: Option<u32>,
    pub failing_sigma: Option<Vec<usize>>,
    pub failing_degree: Option<Vec<u32>>,
}

impl From<&EigenVerdict> for EigenJson {
    fn from(v: &EigenVerdict) -> Self {
        let mut out = EigenJson {
            status: String::new(),
            eigenvalue: None,
            checked_to: None,
            failing_sigma: None,
            failing_degree: None,
        };
        match v {
            EigenVerdict::Eigenvalue { value, checked_to } => {
                out.status = "eigenfunction".into();
                out.eigenvalue = Some(value.to_string());
                out.checked_to = Some(*checked_to);
            }
            EigenVerdict::SigmaDependent { .. } => out.status = "sigma-dependent".into(),
            EigenVerdict::Mismatch { sigma, degree } => {
                out.status = "mismatch".into();
                out.failing_sigma = Some(sigma.clone());
                out.failing_degree = Some(degree.clone());
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConservationJson {
    pub rank: usize,
    pub q_degree: u32,
    pub dimension: usize,
    pub operators: Vec<OperatorJson>,
    pub eigen: Vec<EigenJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRowJson {
    pub m: u32,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerreRowJson {
    pub rank: usize,
    pub orientation: Vec<bool>,
    pub i: usize,
    pub j: usize,
    pub sign: i32,
    pub exponent: i32,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QgroupJson {
    pub identity: Vec<IdentityRowJson>,
    pub serre: Vec<SerreRowJson>,
}
