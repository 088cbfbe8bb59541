//! Fixed-point-parallel drivers over the core engine. `QTODA_THREADS` caps
//! the worker count; results are assembled in fixed-point order, so output
//! does not depend on scheduling.

use qtoda_core::flag::fixed_points;
use qtoda_core::operator::{apply_at, result_truncation, DifferenceOperator};
use qtoda_core::series::{assemble_series, solve_fixed_point, SolveOptions, TwistedSeries};
use qtoda_core::{Error, Result};
use rayon::prelude::*;

/// Worker count from `QTODA_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("QTODA_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs `f` inside a pool sized by [`thread_cap`].
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        b = b.num_threads(n);
    }
    match b.build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

pub fn solve(r: usize, truncation: u32, opts: SolveOptions) -> Result<TwistedSeries> {
    let pts = fixed_points(r)?;
    let per_sigma = with_pool(|| {
        pts.par_iter()
            .map(|s| solve_fixed_point(s, truncation, opts))
            .collect::<Result<Vec<_>>>()
    })?;
    assemble_series(r, truncation, per_sigma)
}

pub fn apply(op: &DifferenceOperator, series: &TwistedSeries) -> Result<TwistedSeries> {
    if op.rank() != series.rank() {
        return Err(Error::RankMismatch(op.rank(), series.rank()));
    }
    let trunc = result_truncation(op, series.truncation())?;
    let pts = fixed_points(series.rank())?;
    let per_sigma = with_pool(|| {
        pts.par_iter()
            .map(|s| apply_at(op, series, s, trunc))
            .collect::<Result<Vec<_>>>()
    })?;
    assemble_series(series.rank(), trunc, per_sigma)
}

/// Order-preserving parallel map.
pub fn map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    with_pool(|| items.par_iter().map(f).collect())
}
