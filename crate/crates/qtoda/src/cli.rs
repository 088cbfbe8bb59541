//! Command-line front end. Every command is deterministic: output depends
//! only on the arguments.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtoda_core::hyperquot::{enumerate_hq_fixed_points, k_d};
use qtoda_core::localization::genfun_G;
use qtoda_core::qgroup::{serre_exponent, serre_scalar_check, verify_qbinom_identity, CartanData};
use qtoda_core::series::{DegreeVector, SolveOptions, TwistedSeries};
use serde::Serialize;

use crate::json::{
    first_difference, CensusRowJson, ConservationJson, EigenJson, EulerJson, IdentityRowJson,
    OperatorJson, QgroupJson, SerreRowJson, SeriesJson,
};
use crate::parallel;
use crate::verify::{self, Check, SeriesCache};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qtoda", version, about = "Quantum K-theory J-series, q-Toda operators and their checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Abort when an intermediate numerator or denominator exceeds this many terms.
    #[arg(long)]
    max_terms: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the J-series recursion and print every localized coefficient.
    Jseries {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        truncation: u32,
        /// Also write the JSON to this file.
        #[arg(long)]
        golden: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the verification suite for one rank, or the acceptance criteria.
    Verify {
        #[arg(long, required_unless_present_any = ["acceptance", "criterion"])]
        rank: Option<usize>,
        #[arg(long, required_unless_present_any = ["acceptance", "criterion"])]
        truncation: Option<u32>,
        /// Compare the solved series against a stored JSON series.
        #[arg(long)]
        golden: Option<String>,
        #[arg(long, conflicts_with_all = ["rank", "truncation", "golden"])]
        acceptance: bool,
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["rank", "truncation", "golden"])]
        criterion: Vec<u8>,
        #[command(flatten)]
        common: Common,
    },
    /// Coefficient of Q^d in the generating function at twist z.
    Euler {
        #[arg(long)]
        rank: usize,
        #[arg(long, value_delimiter = ',')]
        d: Vec<u32>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        z: Vec<i32>,
        #[command(flatten)]
        common: Common,
    },
    /// Torus fixed points of the hyperquot scheme with k_d and observed pole gaps.
    Census {
        #[arg(long)]
        rank: usize,
        #[arg(long, value_delimiter = ',')]
        d: Vec<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Gaussian-binomial identity and Serre scalar checks.
    Qgroup {
        #[arg(long)]
        check_identity: bool,
        #[arg(long, default_value_t = 8)]
        max_m: u32,
        /// Largest A_r rank for the Serre checks (0 skips them).
        #[arg(long, default_value_t = 5)]
        serre_rank: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Operators commuting with the Toda operator inside the binary-shift ansatz.
    Conservation {
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 1)]
        q_degree: u32,
        /// Truncation of the series used for the eigen checks.
        #[arg(long, default_value_t = 4)]
        truncation: u32,
        #[command(flatten)]
        common: Common,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn json<T: Serialize>(&mut self, v: &T) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *self.out, v)?;
        writeln!(self.out)
    }

    fn usage(&mut self, msg: &str) -> i32 {
        let _ = writeln!(self.err, "error: {msg}");
        EXIT_USAGE
    }

    fn failure(&mut self, msg: &str) -> i32 {
        let _ = writeln!(self.err, "error: {msg}");
        EXIT_FAIL
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let mut io = Io { out, err };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(io.err, "{text}")
            } else {
                write!(io.out, "{text}")
            };
            return code;
        }
    };
    let res = match cli.command {
        Command::Jseries {
            rank,
            truncation,
            golden,
            common,
        } => cmd_jseries(&mut io, rank, truncation, golden, &common),
        Command::Verify {
            rank,
            truncation,
            golden,
            acceptance,
            criterion,
            common,
        } => cmd_verify(&mut io, rank, truncation, golden, acceptance, criterion, &common),
        Command::Euler { rank, d, z, common } => cmd_euler(&mut io, rank, d, z, &common),
        Command::Census { rank, d, common } => cmd_census(&mut io, rank, d, &common),
        Command::Qgroup {
            check_identity,
            max_m,
            serre_rank,
            common,
        } => cmd_qgroup(&mut io, check_identity, max_m, serre_rank, &common),
        Command::Conservation {
            rank,
            q_degree,
            truncation,
            common,
        } => cmd_conservation(&mut io, rank, q_degree, truncation, &common),
    };
    match res {
        Ok(code) => code,
        Err(e) => io.failure(&format!("output: {e}")),
    }
}

fn check_rank(io: &mut Io, rank: usize) -> Option<i32> {
    (rank == 0).then(|| io.usage("--rank must be at least 1"))
}

fn solve(common: &Common, rank: usize, truncation: u32) -> qtoda_core::Result<TwistedSeries> {
    let opts = SolveOptions {
        max_terms: common.max_terms,
        ..SolveOptions::default()
    };
    parallel::solve(rank, truncation, opts)
}

fn cell_text(degree: &[u32], sigma: &[usize], value: &str) -> String {
    format!("{:<14} {:<14} {}", format!("{degree:?}"), format!("{sigma:?}"), value)
}

fn cmd_jseries(
    io: &mut Io,
    rank: usize,
    truncation: u32,
    golden: Option<String>,
    common: &Common,
) -> std::io::Result<i32> {
    if let Some(c) = check_rank(io, rank) {
        return Ok(c);
    }
    let s = match solve(common, rank, truncation) {
        Ok(s) => s,
        Err(e) => return Ok(io.failure(&e.to_string())),
    };
    let j = SeriesJson::from_series(&s);
    if let Some(path) = golden {
        let text = serde_json::to_string_pretty(&j).expect("serializable") + "\n";
        if let Err(e) = std::fs::write(&path, text) {
            return Ok(io.failure(&format!("{path}: {e}")));
        }
    }
    match common.format {
        Format::Json => io.json(&j)?,
        Format::Text => {
            writeln!(io.out, "rank {rank} truncation {truncation}")?;
            for c in &j.coefficients {
                let v = if c.den == "1" {
                    c.num.clone()
                } else {
                    format!("({}) / ({})", c.num, c.den)
                };
                writeln!(io.out, "{}", cell_text(&c.degree, &c.sigma, &v))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn report(io: &mut Io, checks: &[Check], common: &Common) -> std::io::Result<i32> {
    match common.format {
        Format::Json => io.json(&checks)?,
        Format::Text => {
            for c in checks {
                writeln!(io.out, "{}", c.line())?;
            }
        }
    }
    Ok(match verify::first_failure(checks) {
        None => EXIT_OK,
        Some(c) => {
            let msg = match &c.failing {
                Some((s, d)) => format!("{} failed at sigma {s:?}, degree {d:?}", c.name),
                None => format!("{} failed: {}", c.name, c.detail),
            };
            io.failure(&msg)
        }
    })
}

fn golden_check(path: &str, solved: &TwistedSeries) -> Check {
    let name = format!("golden {path}");
    let fail = |detail: String, cell: Option<(Vec<usize>, Vec<u32>)>| Check {
        id: None,
        name: name.clone(),
        passed: false,
        detail,
        failing: cell,
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(e.to_string(), None),
    };
    let parsed: SeriesJson = match serde_json::from_str(&text) {
        Ok(j) => j,
        Err(e) => return fail(format!("malformed JSON: {e}"), None),
    };
    let expected = match parsed.to_series() {
        Ok(s) => s,
        Err(e) => return fail(e, None),
    };
    if expected.rank() != solved.rank() || expected.truncation() != solved.truncation() {
        return fail(
            format!(
                "golden has rank {} truncation {}, solved rank {} truncation {}",
                expected.rank(),
                expected.truncation(),
                solved.rank(),
                solved.truncation()
            ),
            None,
        );
    }
    match first_difference(&expected, solved) {
        Some((d, s)) => fail(
            format!("cell differs at sigma {s:?}, degree {d:?}"),
            Some((s, d)),
        ),
        None => Check {
            id: None,
            name,
            passed: true,
            detail: "every cell matches".into(),
            failing: None,
        },
    }
}

fn cmd_verify(
    io: &mut Io,
    rank: Option<usize>,
    truncation: Option<u32>,
    golden: Option<String>,
    acceptance: bool,
    criteria: Vec<u8>,
    common: &Common,
) -> std::io::Result<i32> {
    let cache = SeriesCache::new();
    if acceptance || !criteria.is_empty() {
        let ids: Vec<u8> = if acceptance {
            verify::CRITERIA.iter().map(|(i, _)| *i).collect()
        } else {
            criteria
        };
        if let Some(bad) = ids.iter().find(|i| !(1..=10).contains(*i)) {
            return Ok(io.usage(&format!("no criterion {bad}; criteria are 1..=10")));
        }
        let checks: Vec<Check> = ids.iter().map(|i| verify::criterion(*i, &cache)).collect();
        return report(io, &checks, common);
    }
    let (rank, truncation) = (rank.expect("required by clap"), truncation.expect("required by clap"));
    if let Some(c) = check_rank(io, rank) {
        return Ok(c);
    }
    let s = match solve(common, rank, truncation) {
        Ok(s) => s,
        Err(e) => return Ok(io.failure(&e.to_string())),
    };
    let mut checks = Vec::new();
    if let Some(path) = &golden {
        checks.push(golden_check(path, &s));
    }
    checks.extend(verify::rank_suite(&s));
    report(io, &checks, common)
}

fn degree_arg(io: &mut Io, rank: usize, d: Vec<u32>) -> Result<DegreeVector, i32> {
    if d.len() != rank {
        return Err(io.usage(&format!("--d needs {rank} entries, got {}", d.len())));
    }
    Ok(DegreeVector::new(d))
}

fn cmd_euler(io: &mut Io, rank: usize, d: Vec<u32>, z: Vec<i32>, common: &Common) -> std::io::Result<i32> {
    if let Some(c) = check_rank(io, rank) {
        return Ok(c);
    }
    let d = match degree_arg(io, rank, d) {
        Ok(d) => d,
        Err(c) => return Ok(c),
    };
    if z.len() != rank {
        return Ok(io.usage(&format!("--z needs {rank} entries, got {}", z.len())));
    }
    let g = match genfun_G(rank, &z, d.total()) {
        Ok(g) => g,
        Err(e) => return Ok(io.failure(&e.to_string())),
    };
    let row = EulerJson {
        degree: d.entries().to_vec(),
        z,
        character: g[&d].to_string(),
    };
    match common.format {
        Format::Json => io.json(&row)?,
        Format::Text => writeln!(io.out, "{:<14} {:<14} {}", format!("{:?}", row.degree), format!("{:?}", row.z), row.character)?,
    }
    Ok(EXIT_OK)
}

fn cmd_census(io: &mut Io, rank: usize, d: Vec<u32>, common: &Common) -> std::io::Result<i32> {
    if let Some(c) = check_rank(io, rank) {
        return Ok(c);
    }
    let d = match degree_arg(io, rank, d) {
        Ok(d) => d,
        Err(c) => return Ok(c),
    };
    let rows = enumerate_hq_fixed_points(rank, &d).and_then(|pts| {
        let s = solve(common, rank, d.total())?;
        let k = k_d(&d);
        pts.iter()
            .map(|p| {
                let gap = s.value(&d, &p.sigma).expect("solved degree").q_degree_gap()?;
                Ok(CensusRowJson::new(&d, p, k, gap))
            })
            .collect::<qtoda_core::Result<Vec<_>>>()
    });
    let rows = match rows {
        Ok(r) => r,
        Err(e) => return Ok(io.failure(&e.to_string())),
    };
    match common.format {
        Format::Json => io.json(&rows)?,
        Format::Text => {
            for r in &rows {
                writeln!(
                    io.out,
                    "{:<12} {:<24} {:<24} k_d={:<4} gap={}",
                    format!("{:?}", r.sigma),
                    format!("{:?}", r.delta_plus),
                    format!("{:?}", r.delta_minus),
                    r.k_d,
                    r.observed_gap
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn orientations(rank: usize) -> Vec<Vec<bool>> {
    let edges = rank.saturating_sub(1);
    (0..1u32 << edges)
        .map(|bits| (0..edges).map(|e| bits >> e & 1 == 1).collect())
        .collect()
}

fn cmd_qgroup(
    io: &mut Io,
    check_identity: bool,
    max_m: u32,
    serre_rank: usize,
    common: &Common,
) -> std::io::Result<i32> {
    let run = || -> qtoda_core::Result<QgroupJson> {
        let mut identity = Vec::new();
        if check_identity {
            for m in 0..=max_m {
                identity.push(IdentityRowJson {
                    m,
                    holds: verify_qbinom_identity(m)?,
                });
            }
        }
        let mut serre = Vec::new();
        for rank in 1..=serre_rank {
            for o in orientations(rank) {
                let cd = CartanData::type_a(rank, &o)?;
                for (a, b) in cd.edges() {
                    for (i, j) in [(a, b), (b, a)] {
                        for sign in [1, -1] {
                            serre.push(SerreRowJson {
                                rank,
                                orientation: o.clone(),
                                i,
                                j,
                                sign,
                                exponent: serre_exponent(&cd, i, j, sign),
                                holds: serre_scalar_check(&cd, i, j, sign)?,
                            });
                        }
                    }
                }
            }
        }
        Ok(QgroupJson { identity, serre })
    };
    let res = match run() {
        Ok(r) => r,
        Err(e) => return Ok(io.failure(&e.to_string())),
    };
    match common.format {
        Format::Json => io.json(&res)?,
        Format::Text => {
            for r in &res.identity {
                writeln!(io.out, "identity m={:<3} {}", r.m, if r.holds { "holds" } else { "FAILS" })?;
            }
            for r in &res.serre {
                writeln!(
                    io.out,
                    "serre A{} {:?} ({},{}) sign {:>2} exponent {:>3} {}",
                    r.rank,
                    r.orientation,
                    r.i,
                    r.j,
                    r.sign,
                    r.exponent,
                    if r.holds { "holds" } else { "FAILS" }
                )?;
            }
        }
    }
    let ok = res.identity.iter().all(|r| r.holds) && res.serre.iter().all(|r| r.holds);
    Ok(if ok {
        EXIT_OK
    } else {
        io.failure("q-group check failed")
    })
}

fn cmd_conservation(
    io: &mut Io,
    rank: usize,
    q_degree: u32,
    truncation: u32,
    common: &Common,
) -> std::io::Result<i32> {
    if let Some(c) = check_rank(io, rank) {
        return Ok(c);
    }
    let res = solve(common, rank, truncation).and_then(|s| verify::conservation_report(rank, q_degree, &s));
    let (c, verdicts) = match res {
        Ok(r) => r,
        Err(e) => return Ok(io.failure(&e.to_string())),
    };
    let j = ConservationJson {
        rank,
        q_degree,
        dimension: c.dimension(),
        operators: c.operators.iter().map(OperatorJson::from_operator).collect(),
        eigen: verdicts.iter().map(EigenJson::from).collect(),
    };
    match common.format {
        Format::Json => io.json(&j)?,
        Format::Text => {
            writeln!(io.out, "rank {rank} q-degree {q_degree}: dimension {}", j.dimension)?;
            for (k, (op, e)) in j.operators.iter().zip(&j.eigen).enumerate() {
                writeln!(io.out, "operator {k}: {} terms, {} {}", op.terms.len(), e.status, e.eigenvalue.as_deref().unwrap_or(""))?;
            }
        }
    }
    let ok = j.eigen.iter().all(|e| e.status == "eigenfunction");
    Ok(if ok {
        EXIT_OK
    } else {
        io.failure("a commutant element is not an eigen-operator on the solved series")
    })
}
