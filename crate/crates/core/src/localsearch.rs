//! Path-relocation local search.
//!
//! A move cuts a run `v1 .. vk` of consecutive vertices out of the polygon,
//! joins its outer neighbors `a` and `b`, and splices the run back in
//! reversed order into another edge `u1 -> u2`:
//!
//! ```text
//! before:  a v1 .. vk b  ...  u1 u2
//! after:   a b  ...  u1 vk .. v1 u2
//! ```
//!
//! As in the greedy phase, minimization works on a clockwise polygon, so in
//! both modes a move improves the objective iff it raises the signed doubled
//! area.

use alloc::vec::Vec;

use crate::geom::{cross, segments_properly_interact, Point, Segment};
use crate::model::{Instance, Objective, Polygon};
use crate::params::{Hood, SolveParams};
use crate::spatial::{EdgeGrid, EdgeKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub v1: u32,
    pub vk: u32,
    /// Number of vertices in the run.
    pub k: usize,
    pub u1: u32,
    pub u2: u32,
    /// Signed doubled-area increase.
    pub gain: i128,
}

/// Endpoints and area terms of the run of `k` vertices starting at `v1`.
#[derive(Clone, Copy, Debug)]
struct Run {
    a: u32,
    vk: u32,
    b: u32,
    /// Sum of `cross(v_i, v_{i+1})` along the run.
    inner: i128,
}

/// Extends `run` by one vertex.
fn grow(points: &[Point], poly: &Polygon, run: Run) -> Run {
    let next = run.b;
    Run {
        a: run.a,
        vk: next,
        b: poly.next(next),
        inner: run.inner + cross(points[run.vk as usize], points[next as usize]),
    }
}

fn first_run(poly: &Polygon, v1: u32) -> Run {
    Run { a: poly.prev(v1), vk: v1, b: poly.next(v1), inner: 0 }
}

#[inline]
fn removal_term(points: &[Point], v1: u32, run: &Run) -> i128 {
    let p = |i: u32| points[i as usize];
    cross(p(run.a), p(run.b)) - cross(p(run.a), p(v1)) - cross(p(run.vk), p(run.b)) - run.inner
}

#[inline]
fn splice_term(points: &[Point], v1: u32, run: &Run, u1: u32, u2: u32) -> i128 {
    let p = |i: u32| points[i as usize];
    cross(p(u1), p(run.vk)) + cross(p(v1), p(u2)) - cross(p(u1), p(u2)) - run.inner
}

/// Exact change of doubled area when the run of `k` vertices starting at
/// `v1` is moved, reversed, into edge `u1 -> next(u1)`.
///
/// Panics if the run is not a proper sub-path or the edge touches it.
pub fn move_gain(points: &[Point], poly: &Polygon, v1: u32, k: usize, u1: u32) -> i128 {
    assert!(k >= 1 && k + 3 <= poly.len(), "run length {k} out of range");
    let mut run = first_run(poly, v1);
    let mut members = Vec::with_capacity(k);
    members.push(v1);
    for _ in 1..k {
        run = grow(points, poly, run);
        members.push(run.vk);
    }
    let u2 = poly.next(u1);
    assert!(!members.contains(&u1) && !members.contains(&u2), "target edge {u1}-{u2} touches the run");
    removal_term(points, v1, &run) + splice_term(points, v1, &run, u1, u2)
}

/// The local search keeps its own grid, finer than the greedy one: about two
/// points per cell.
fn ls_columns(n: usize) -> usize {
    libm::round(libm::sqrt(n as f64 / 2.0)) as usize
}

const LS_LONG_EDGE_CELLS: usize = 16;

/// Radius of the target edge search, in cells of the local search grid.
pub const LS_REACH: u32 = 3;

fn ls_hood(params: &SolveParams, n: usize) -> Hood {
    match params.effective_hood(n) {
        Hood::Infinite => Hood::Infinite,
        Hood::Cells(_) => Hood::Cells(LS_REACH),
    }
}

/// Local search state: the polygon and a grid holding all of its edges.
pub struct LocalSearch<'a> {
    points: &'a [Point],
    poly: Polygon,
    grid: EdgeGrid<'a>,
    objective: Objective,
    hops: usize,
    hood: Hood,
}

impl<'a> LocalSearch<'a> {
    pub fn new(instance: &'a Instance, poly: Polygon, params: &SolveParams) -> Self {
        let points = instance.points();
        let ids: Vec<u32> = (0..points.len() as u32).collect();
        let mut grid = EdgeGrid::with_layout(points, &ids, ls_columns(points.len()), LS_LONG_EDGE_CELLS);
        for (a, b) in poly.edges() {
            grid.add_edge(a, b);
        }
        LocalSearch {
            points,
            poly,
            grid,
            objective: params.objective,
            hops: params.hops,
            hood: ls_hood(params, points.len()),
        }
    }

    pub fn polygon(&self) -> &Polygon {
        &self.poly
    }

    pub fn grid(&self) -> &EdgeGrid<'a> {
        &self.grid
    }

    pub fn into_polygon(self) -> Polygon {
        self.poly
    }

    fn max_run(&self) -> usize {
        self.hops.min(self.poly.len().saturating_sub(3))
    }

    /// Whether the polygon after `m` is simple and keeps its orientation.
    fn valid(&self, m: &Move, a: u32, b: u32) -> bool {
        if (self.poly.area2() + m.gain) * self.objective.orientation() <= 0 {
            return false;
        }
        let p = |i: u32| self.points[i as usize];
        let new = [(a, b), (m.u1, m.vk), (m.v1, m.u2)];
        for i in 0..3 {
            for j in i + 1..3 {
                let (s, t) = (new[i], new[j]);
                if segments_properly_interact(Segment::new(p(s.0), p(s.1)), Segment::new(p(t.0), p(t.1))) {
                    return false;
                }
            }
        }
        let skip = [EdgeKey::new(a, m.v1), EdgeKey::new(m.vk, b), EdgeKey::new(m.u1, m.u2)];
        new.iter().all(|&(s, t)| !self.grid.any_interaction(s, t, &skip))
    }

    /// Every improving move that keeps the polygon simple, best first.
    /// Target edges are limited to the neighborhood of `v1`.
    pub fn collect_moves(&self) -> Vec<Move> {
        let pts = self.points;
        let max_run = self.max_run();
        let mut out = Vec::new();
        if max_run == 0 {
            return out;
        }
        let mut near = Vec::new();
        let mut targets: Vec<(u32, u32)> = Vec::new();
        let mut members: Vec<u32> = Vec::with_capacity(max_run);
        for v1 in self.poly.vertices() {
            self.grid.edges_near(v1, self.hood, &mut near);
            targets.clear();
            targets.extend(near.iter().map(|key| {
                let (lo, hi) = key.ends();
                if self.poly.next(lo) == hi {
                    (lo, hi)
                } else {
                    (hi, lo)
                }
            }));
            let mut run = first_run(&self.poly, v1);
            members.clear();
            members.push(v1);
            for k in 1..=max_run {
                if k > 1 {
                    run = grow(pts, &self.poly, run);
                    members.push(run.vk);
                }
                let removal = removal_term(pts, v1, &run);
                for &(u1, u2) in &targets {
                    if members.contains(&u1) || members.contains(&u2) {
                        continue;
                    }
                    let gain = removal + splice_term(pts, v1, &run, u1, u2);
                    if gain <= 0 {
                        continue;
                    }
                    let m = Move { v1, vk: run.vk, k, u1, u2, gain };
                    if self.valid(&m, run.a, run.b) {
                        out.push(m);
                    }
                }
            }
        }
        out.sort_by(|x, y| y.gain.cmp(&x.gain).then(x.v1.cmp(&y.v1)).then(x.u1.cmp(&y.u1)).then(x.k.cmp(&y.k)));
        out
    }

    /// Re-scores `m` against the current polygon. Returns the refreshed move
    /// if it is still well formed, improving and valid.
    pub fn revalidate(&self, m: &Move) -> Option<Move> {
        if m.k + 3 > self.poly.len() || self.poly.next(m.u1) != m.u2 {
            return None;
        }
        let mut run = first_run(&self.poly, m.v1);
        if [m.u1, m.u2].contains(&m.v1) {
            return None;
        }
        for _ in 1..m.k {
            run = grow(self.points, &self.poly, run);
            if [m.u1, m.u2].contains(&run.vk) {
                return None;
            }
        }
        if run.vk != m.vk {
            return None;
        }
        let gain = removal_term(self.points, m.v1, &run) + splice_term(self.points, m.v1, &run, m.u1, m.u2);
        let fresh = Move { gain, ..*m };
        (gain > 0 && self.valid(&fresh, run.a, run.b)).then_some(fresh)
    }

    /// Applies a move produced by [`Self::revalidate`] or
    /// [`Self::collect_moves`] on the current polygon.
    pub fn apply(&mut self, m: &Move) {
        let a = self.poly.prev(m.v1);
        let b = self.poly.next(m.vk);
        self.grid.remove_edge(a, m.v1);
        self.grid.remove_edge(m.vk, b);
        self.grid.remove_edge(m.u1, m.u2);
        self.poly.relocate_reversed(m.v1, m.k, m.u1, m.gain);
        self.grid.add_edge(a, b);
        self.grid.add_edge(m.u1, m.vk);
        self.grid.add_edge(m.v1, m.u2);
        #[cfg(debug_assertions)]
        if self.poly.len() <= 48 {
            debug_assert_eq!(self.poly.area2(), self.poly.shoelace2(self.points));
            let cycle = self.poly.canonical_cycle();
            debug_assert!(crate::model::verify_simple_naive(self.points, &cycle).unwrap());
        }
    }

    /// One pass over a freshly collected move list. Returns the total gain
    /// and the number of moves applied.
    pub fn round(&mut self) -> (i128, usize) {
        let moves = self.collect_moves();
        let (mut total, mut applied) = (0, 0);
        for m in &moves {
            if let Some(fresh) = self.revalidate(m) {
                self.apply(&fresh);
                total += fresh.gain;
                applied += 1;
            }
        }
        (total, applied)
    }
}

#[derive(Clone, Debug)]
pub struct LocalSearchOutcome {
    pub polygon: Polygon,
    pub rounds: usize,
    pub moves: usize,
}

/// Rounds of [`LocalSearch::round`] until one improves the score (doubled
/// area over doubled hull area) by less than `params.ls_epsilon`.
pub fn run_local_search(
    instance: &Instance,
    poly: Polygon,
    hull_area2: i128,
    params: &SolveParams,
) -> LocalSearchOutcome {
    let mut ls = LocalSearch::new(instance, poly, params);
    let (mut rounds, mut moves) = (0, 0);
    loop {
        let (gain, applied) = ls.round();
        rounds += 1;
        moves += applied;
        if applied == 0 || (gain as f64) < params.ls_epsilon * hull_area2 as f64 {
            break;
        }
    }
    LocalSearchOutcome { polygon: ls.into_polygon(), rounds, moves }
}
