//! Parallel drivers around the sequential core solver.
//!
//! Independent attempts and cell solves run on a rayon pool. Results are
//! collected in attempt order before picking, so the outcome never depends
//! on scheduling.

use polyg_core::merge::{cell_instance, merge_all, partition, CellPolygon, Merged};
use polyg_core::solve::{pick_best, restart_params, solve};
use polyg_core::{Error, Instance, Polygon, Solution, SolveParams};
use rayon::prelude::*;

/// Rayon pool sized by `POLYG_THREADS` when set, otherwise by rayon's default.
pub fn pool() -> rayon::ThreadPool {
    let threads = std::env::var("POLYG_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).unwrap_or(0);
    pool_with(threads)
}

/// Pool with exactly `threads` workers, or rayon's default for 0.
pub fn pool_with(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
}

/// Best of `restarts` attempts (at least one), solved concurrently.
pub fn solve_restarts(instance: &Instance, params: &SolveParams, restarts: usize) -> Result<Solution, Error> {
    let results: Vec<Result<Solution, Error>> = pool().install(|| {
        (0..restarts.max(1)).into_par_iter().map(|attempt| solve(instance, &restart_params(params, attempt))).collect()
    });
    let mut first_err = None;
    let mut ok = Vec::new();
    for r in results {
        match r {
            Ok(s) => ok.push(s),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match pick_best(&ok) {
        Some(i) => Ok(ok.swap_remove(i)),
        None => Err(first_err.expect("at least one attempt ran")),
    }
}

/// Divide and conquer with cells solved concurrently.
pub fn solve_dnc(instance: &Instance, params: &SolveParams, g: usize) -> Result<Merged, Error> {
    let part = partition(instance, g)?;
    let active: Vec<usize> = part.active_cells().collect();
    let solved: Result<Vec<CellPolygon>, Error> = pool().install(|| {
        active
            .par_iter()
            .map(|&c| {
                let ids = &part.cells[c];
                let sub = cell_instance(instance, ids)?;
                let poly: Polygon = solve(&sub, params)?.polygon;
                Ok(CellPolygon::lift(c, ids, &poly))
            })
            .collect()
    });
    merge_all(instance, &part, &solved?, params)
}
