//! The full pipeline: greedy insertion, local search, restarts and the
//! divide-and-conquer path for huge inputs.

use alloc::vec::Vec;

use crate::greedy::{mix_seed, run_greedy};
use crate::localsearch::run_local_search;
use crate::merge::{merge_all, partition_solve, Merged};
use crate::model::{Instance, Polygon};
use crate::params::SolveParams;
use crate::Error;

/// Instances above this size are split into cells by default.
pub const DNC_THRESHOLD: usize = 200_000;
/// Default cell grid size for the split.
pub const DNC_GRID: usize = 32;

#[derive(Clone, Debug)]
pub struct Solution {
    /// Oriented counterclockwise when maximizing, clockwise when minimizing.
    pub polygon: Polygon,
    pub greedy_area2: i128,
    pub hull_area2: i128,
    /// Index into the greedy retry schedule that succeeded.
    pub greedy_attempt: usize,
    pub ls_rounds: usize,
    pub ls_moves: usize,
}

impl Solution {
    pub fn score(&self) -> f64 {
        self.polygon.area2().abs() as f64 / self.hull_area2 as f64
    }

    pub fn greedy_score(&self) -> f64 {
        self.greedy_area2.abs() as f64 / self.hull_area2 as f64
    }

    /// Counterclockwise vertex cycle starting at the smallest id.
    pub fn cycle(&self) -> Vec<u32> {
        let mut p = self.polygon.clone();
        if p.area2() < 0 {
            p.reverse();
        }
        p.canonical_cycle()
    }
}

/// Greedy insertion followed by local search.
pub fn solve(instance: &Instance, params: &SolveParams) -> Result<Solution, Error> {
    let hull_area2 = instance.hull_area2()?;
    let greedy = run_greedy(instance, params)?;
    let greedy_area2 = greedy.polygon.area2();
    let ls = run_local_search(instance, greedy.polygon, hull_area2, params);
    Ok(Solution {
        polygon: ls.polygon,
        greedy_area2,
        hull_area2,
        greedy_attempt: greedy.attempt,
        ls_rounds: ls.rounds,
        ls_moves: ls.moves,
    })
}

/// Parameters of restart `attempt`. Attempt 0 is `params` itself; later
/// attempts get independent seeds and, if `params` has no noise, sigma 0.5.
pub fn restart_params(params: &SolveParams, attempt: usize) -> SolveParams {
    if attempt == 0 {
        return params.clone();
    }
    SolveParams {
        seed: mix_seed(params.seed, 0x5EED_0000 + attempt as u64),
        sigma: if params.sigma == 0.0 { 0.5 } else { params.sigma },
        ..params.clone()
    }
}

/// Index of the best result; ties go to the earliest attempt.
pub fn pick_best(results: &[Solution]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, s) in results.iter().enumerate() {
        if best.is_none_or(|b| s.polygon.area2() > results[b].polygon.area2()) {
            best = Some(i);
        }
    }
    best
}

/// Runs `restarts` attempts (at least one) sequentially and keeps the best.
pub fn solve_restarts(instance: &Instance, params: &SolveParams, restarts: usize) -> Result<Solution, Error> {
    let mut results = Vec::new();
    let mut first_err = None;
    for attempt in 0..restarts.max(1) {
        match solve(instance, &restart_params(params, attempt)) {
            Ok(s) => results.push(s),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match pick_best(&results) {
        Some(i) => Ok(results.swap_remove(i)),
        None => Err(first_err.expect("at least one attempt ran")),
    }
}

/// Splits the instance into a `g x g` grid, solves every cell and merges.
pub fn solve_dnc(instance: &Instance, params: &SolveParams, g: usize) -> Result<Merged, Error> {
    let (part, cells) = partition_solve(instance, params, g, |sub, p| solve(sub, p).map(|s| s.polygon))?;
    merge_all(instance, &part, &cells, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{brute_force_optimum, score, Objective};

    fn square_plus(extra: (i64, i64)) -> Instance {
        Instance::new("t", &[(0, 0), (10, 0), (10, 10), (0, 10), extra]).unwrap()
    }

    #[test]
    fn known_optima() {
        let s = solve(&square_plus((5, 5)), &SolveParams::new(Objective::Min)).unwrap();
        assert_eq!(s.score(), 0.75);
        let s = solve(&square_plus((5, 1)), &SolveParams::default()).unwrap();
        assert_eq!(s.score(), 0.95);
        let (opt, _) = brute_force_optimum(&square_plus((5, 1)), Objective::Max).unwrap();
        assert_eq!(opt.score, 0.95);
    }

    #[test]
    fn cycle_is_counterclockwise() {
        let inst = square_plus((5, 1));
        let s = solve(&inst, &SolveParams::new(Objective::Min)).unwrap();
        let cycle = s.cycle();
        assert_eq!(cycle[0], 0);
        assert!(crate::model::shoelace2(inst.points(), cycle.iter().copied()) > 0);
        assert_eq!(score(&inst, &s.polygon).unwrap().score, s.score());
    }

    #[test]
    fn restart_derivation() {
        let p = SolveParams { seed: 11, ..Default::default() };
        assert_eq!(restart_params(&p, 0), p);
        let r1 = restart_params(&p, 1);
        let r2 = restart_params(&p, 2);
        assert_eq!(r1.sigma, 0.5);
        assert_ne!(r1.seed, r2.seed);
        assert_eq!(restart_params(&p, 1), r1);
        let noisy = SolveParams { sigma: 0.2, ..p };
        assert_eq!(restart_params(&noisy, 3).sigma, 0.2);
    }

    #[test]
    fn restarts_never_worse_than_first() {
        let coords: Vec<(i64, i64)> = (0..30).map(|i| ((i * 37) % 101, (i * i * 13) % 97)).collect();
        let inst = Instance::new("t", &coords).unwrap();
        for objective in [Objective::Max, Objective::Min] {
            let params = SolveParams::new(objective);
            let one = solve(&inst, &params).unwrap();
            let many = solve_restarts(&inst, &params, 6).unwrap();
            assert!(many.polygon.area2() >= one.polygon.area2());
        }
    }
}
