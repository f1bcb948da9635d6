//! Greedy insertion.
//!
//! Starting from a simple polygon (the convex hull when maximizing, a small
//! triangle when minimizing) the cheapest `(edge, point)` insertion that
//! keeps the polygon simple is applied until every point is a vertex.
//!
//! Both objectives share one code path. Minimization runs on a clockwise
//! polygon, so in both modes the goal is to keep the signed doubled area as
//! large as possible and the weight's area term is the signed area lost by
//! an insertion.
//!
//! Every polygon edge owns a min-heap of candidate points keyed by weight; a
//! top-level heap holds the minimum of each edge heap. Entries are deleted
//! lazily: an edge heap is dropped wholesale when its edge is split, and
//! points that became vertices are skipped when popped.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::geom::{dist, segments_properly_interact, signed_area2, Point, Segment};
use crate::model::{Instance, Objective, Polygon, NIL};
use crate::noise::Noise;
use crate::params::{Hood, SolveParams, WeightVariant};
use crate::spatial::{EdgeGrid, EdgeKey};
use crate::Error;

/// Lengths in the penalty term are measured in units of `PENALTY_SCALE`
/// mean point spacings, `sqrt(hull area / n)`. Weights then scale with the
/// square of the coordinates, so the same `alpha` behaves the same on any
/// coordinate range.
pub const PENALTY_SCALE: f64 = 6.0;

/// Factor applied to `alpha` before it enters [`weight`].
pub fn penalty_unit(hull_area2: i128, n: usize) -> f64 {
    PENALTY_SCALE * libm::sqrt(hull_area2 as f64 * 0.5 / n.max(1) as f64)
}

/// Base weight of inserting `q` between `p1` and `p2`: signed triangle area
/// lost plus `alpha` times the long-edge penalty. `alpha` is taken in
/// coordinate units here; the solver passes `alpha * penalty_unit(..)`.
#[inline]
pub fn weight(p1: Point, p2: Point, q: Point, alpha: f64, variant: WeightVariant) -> f64 {
    let area = signed_area2(p1, p2, q) as f64 * 0.5;
    let detour = dist(q, p1) + dist(q, p2);
    let edge = dist(p1, p2);
    let penalty = match variant {
        WeightVariant::Minus => detour - edge,
        WeightVariant::Plus => detour + edge,
    };
    area + alpha * penalty
}

/// One candidate insertion as it flows through the heaps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CandidateTriple {
    pub origin: u32,
    pub dest: u32,
    pub q: u32,
    /// Noise factor times base weight.
    pub weight: f64,
}

/// Entry of an edge heap. Ordered so that `BinaryHeap` pops the smallest
/// `(weight, q)` first.
#[derive(Clone, Copy, Debug)]
struct Entry {
    weight: f64,
    q: u32,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.weight.total_cmp(&self.weight).then(other.q.cmp(&self.q))
    }
}

/// Top-level heap entry: the minimum of one edge heap at the time it was pushed.
#[derive(Clone, Copy, Debug)]
struct Top {
    weight: f64,
    q: u32,
    origin: u32,
    generation: u32,
}

impl PartialEq for Top {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Top {}
impl PartialOrd for Top {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Top {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .weight
            .total_cmp(&self.weight)
            .then(other.q.cmp(&self.q))
            .then(other.origin.cmp(&self.origin))
            .then(other.generation.cmp(&self.generation))
    }
}

#[derive(Debug)]
struct Slot {
    dest: u32,
    generation: u32,
    heap: BinaryHeap<Entry>,
}

/// Per-edge heaps indexed by edge origin, plus the heap of their minima.
#[derive(Debug)]
struct HeapSystem {
    slots: Vec<Slot>,
    top: BinaryHeap<Top>,
}

impl HeapSystem {
    fn new(n: usize) -> Self {
        let slots = (0..n).map(|_| Slot { dest: NIL, generation: 0, heap: BinaryHeap::new() }).collect();
        HeapSystem { slots, top: BinaryHeap::new() }
    }

    /// Replaces whatever heap `origin` had with a fresh one for edge
    /// `origin -> dest`.
    fn install(&mut self, origin: u32, dest: u32, entries: Vec<Entry>) {
        let slot = &mut self.slots[origin as usize];
        slot.generation = slot.generation.wrapping_add(1);
        slot.dest = dest;
        slot.heap = BinaryHeap::from(entries);
        if let Some(min) = slot.heap.peek() {
            self.top.push(Top { weight: min.weight, q: min.q, origin, generation: slot.generation });
        }
    }

    /// Pops the globally smallest triple whose edge still exists. The point
    /// may already be a vertex; callers filter that.
    fn pop(&mut self) -> Option<CandidateTriple> {
        while let Some(top) = self.top.pop() {
            let slot = &mut self.slots[top.origin as usize];
            if slot.generation != top.generation {
                continue;
            }
            let entry = slot.heap.pop().expect("top entry without edge heap entry");
            debug_assert_eq!(entry.q, top.q);
            if let Some(min) = slot.heap.peek() {
                self.top.push(Top { weight: min.weight, q: min.q, origin: top.origin, generation: slot.generation });
            }
            return Some(CandidateTriple { origin: top.origin, dest: slot.dest, q: entry.q, weight: entry.weight });
        }
        None
    }
}

/// Greedy run that could not place every point.
#[derive(Clone, Debug)]
pub struct GreedyFailure {
    pub polygon: Polygon,
    pub missing: usize,
}

/// Incremental greedy state; [`GreedyState::step`] performs one insertion.
pub struct GreedyState<'a> {
    points: &'a [Point],
    objective: Objective,
    alpha: f64,
    variant: WeightVariant,
    hood: Hood,
    poly: Polygon,
    grid: EdgeGrid<'a>,
    heaps: HeapSystem,
    noise: Noise,
}

impl<'a> GreedyState<'a> {
    /// `start` must be simple and oriented for the objective.
    pub fn new(instance: &'a Instance, start: Polygon, params: &SolveParams) -> Self {
        let points = instance.points();
        let mut grid = EdgeGrid::new(points);
        for (a, b) in start.edges() {
            grid.add_edge(a, b);
        }
        let mut state = GreedyState {
            points,
            objective: params.objective,
            alpha: params.alpha * penalty_unit(instance.hull_area2().unwrap_or(0), points.len()),
            variant: params.weight_variant,
            hood: params.effective_hood(points.len()),
            poly: start,
            grid,
            heaps: HeapSystem::new(points.len()),
            noise: Noise::new(params.sigma, params.seed),
        };
        let edges: Vec<(u32, u32)> = state.poly.edges().collect();
        for (a, b) in edges {
            state.build_heap(a, b);
        }
        state
    }

    pub fn polygon(&self) -> &Polygon {
        &self.poly
    }

    pub fn into_polygon(self) -> Polygon {
        self.poly
    }

    pub fn is_complete(&self) -> bool {
        self.poly.len() == self.points.len()
    }

    fn build_heap(&mut self, p1: u32, p2: u32) {
        let (a, b) = (self.points[p1 as usize], self.points[p2 as usize]);
        let mut entries = Vec::new();
        for q in self.grid.candidate_points(p1, p2, self.hood) {
            if self.poly.contains(q) {
                continue;
            }
            let c = self.points[q as usize];
            // Minimization only ever grows the polygon.
            if self.objective == Objective::Min && signed_area2(a, b, c) <= 0 {
                continue;
            }
            let w = self.noise.factor() * weight(a, b, c, self.alpha, self.variant);
            entries.push(Entry { weight: w, q });
        }
        self.heaps.install(p1, p2, entries);
    }

    /// Whether `q` can be spliced into edge `p1 -> p2` right now.
    pub fn insertable(&self, p1: u32, p2: u32, q: u32) -> bool {
        let (a, b, c) = (self.points[p1 as usize], self.points[p2 as usize], self.points[q as usize]);
        let lost = signed_area2(a, b, c) as i128;
        if self.objective == Objective::Min && lost <= 0 {
            return false;
        }
        if (self.poly.area2() - lost) * self.objective.orientation() <= 0 {
            return false;
        }
        if segments_properly_interact(Segment::new(a, c), Segment::new(c, b)) {
            return false;
        }
        let skip = [EdgeKey::new(p1, p2)];
        !self.grid.any_interaction(p1, q, &skip) && !self.grid.any_interaction(q, p2, &skip)
    }

    /// Inserts the cheapest valid triple, or returns `None` when the heaps
    /// are exhausted.
    pub fn step(&mut self) -> Option<CandidateTriple> {
        while let Some(t) = self.heaps.pop() {
            if self.poly.contains(t.q) || !self.insertable(t.origin, t.dest, t.q) {
                continue;
            }
            self.poly.insert_after(self.points, t.origin, t.q);
            self.grid.remove_edge(t.origin, t.dest);
            self.grid.add_edge(t.origin, t.q);
            self.grid.add_edge(t.q, t.dest);
            self.build_heap(t.origin, t.q);
            self.build_heap(t.q, t.dest);
            #[cfg(debug_assertions)]
            if self.poly.len() <= 48 {
                let cycle = self.poly.canonical_cycle();
                debug_assert!(crate::model::verify_simple_naive(self.points, &cycle).unwrap());
            }
            return Some(t);
        }
        None
    }

    pub fn run(mut self) -> Result<Polygon, GreedyFailure> {
        while !self.is_complete() {
            if self.step().is_none() {
                let missing = self.points.len() - self.poly.len();
                return Err(GreedyFailure { polygon: self.poly, missing });
            }
        }
        Ok(self.poly)
    }
}

/// Greedy completion of an arbitrary simple start polygon.
pub fn greedy_from(instance: &Instance, start: Polygon, params: &SolveParams) -> Result<Polygon, GreedyFailure> {
    GreedyState::new(instance, start, params).run()
}

/// Counterclockwise strict convex hull as a polygon.
pub fn init_max(instance: &Instance) -> Result<Polygon, Error> {
    let pts = instance.points();
    let hull: Vec<u32> = crate::geom::convex_hull(pts)?.into_iter().map(|i| pts[i].id).collect();
    Polygon::from_cycle(pts, &hull)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StartTriangle {
    /// Sorted vertex ids.
    pub ids: [u32; 3],
    pub perimeter: f64,
}

/// Nearest neighbor of every point by a sweep over x-sorted order. Ties go
/// to the lower id.
fn nearest_neighbors(pts: &[Point], order: &[u32], rank: &[usize]) -> Vec<u32> {
    let d2 = |a: Point, b: Point| {
        let (dx, dy) = ((a.x - b.x) as i128, (a.y - b.y) as i128);
        dx * dx + dy * dy
    };
    pts.iter()
        .map(|&p| {
            let i = rank[p.id as usize];
            let mut best = (i128::MAX, u32::MAX);
            let mut consider = |j: usize| -> bool {
                let q = pts[order[j] as usize];
                let dx = (q.x - p.x) as i128;
                if dx * dx > best.0 {
                    return false;
                }
                let cand = (d2(p, q), q.id);
                if cand < best {
                    best = cand;
                }
                true
            };
            for j in i + 1..order.len() {
                if !consider(j) {
                    break;
                }
            }
            for j in (0..i).rev() {
                if !consider(j) {
                    break;
                }
            }
            best.1
        })
        .collect()
}

/// Starting triangles for minimization: for every point `p1`, `p2` is its
/// nearest neighbor and `p3` the point minimizing the perimeter of
/// `p1 p2 p3` among non-collinear choices. Deduplicated, sorted by perimeter.
pub fn init_min_triangles(instance: &Instance) -> Vec<StartTriangle> {
    let pts = instance.points();
    let mut order: Vec<u32> = (0..pts.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        let (p, q) = (pts[a as usize], pts[b as usize]);
        p.x.cmp(&q.x).then(p.y.cmp(&q.y))
    });
    let mut rank = vec![0usize; pts.len()];
    for (r, &id) in order.iter().enumerate() {
        rank[id as usize] = r;
    }
    let nn = nearest_neighbors(pts, &order, &rank);

    let mut out: Vec<StartTriangle> = Vec::new();
    for p1 in pts {
        let p2 = pts[nn[p1.id as usize] as usize];
        let i = rank[p1.id as usize];
        let mut best: Option<(f64, u32)> = None;
        let mut consider = |j: usize| -> bool {
            let p3 = pts[order[j] as usize];
            let bound = ((p3.x - p1.x).abs() + (p3.x - p2.x).abs()) as f64;
            if best.is_some_and(|(b, _)| bound > b) {
                return false;
            }
            if p3.id == p2.id || signed_area2(*p1, p2, p3) == 0 {
                return true;
            }
            let d = dist(*p1, p3) + dist(p2, p3);
            let better = match best {
                None => true,
                Some((b, id)) => d < b || (d == b && p3.id < id),
            };
            if better {
                best = Some((d, p3.id));
            }
            true
        };
        for j in i + 1..order.len() {
            if !consider(j) {
                break;
            }
        }
        for j in (0..i).rev() {
            if !consider(j) {
                break;
            }
        }
        if let Some((d, p3)) = best {
            let mut ids = [p1.id, p2.id, p3];
            ids.sort_unstable();
            out.push(StartTriangle { ids, perimeter: d + dist(*p1, p2) });
        }
    }
    out.sort_by_key(|t| t.ids);
    out.dedup_by(|a, b| a.ids == b.ids);
    out.sort_by(|a, b| a.perimeter.total_cmp(&b.perimeter).then(a.ids.cmp(&b.ids)));
    out
}

/// Clockwise triangle polygon for a minimization start.
pub fn triangle_polygon(instance: &Instance, t: &StartTriangle) -> Polygon {
    let pts = instance.points();
    let [a, b, c] = t.ids;
    let cycle = if signed_area2(pts[a as usize], pts[b as usize], pts[c as usize]) > 0 { [a, c, b] } else { [a, b, c] };
    Polygon::from_cycle(pts, &cycle).expect("triangle ids are valid")
}

/// One greedy attempt with fixed parameters: the hull start when
/// maximizing, the best completed start triangle when minimizing.
pub fn greedy_once(instance: &Instance, params: &SolveParams) -> Result<Polygon, GreedyFailure> {
    match params.objective {
        Objective::Max => {
            let start = init_max(instance).map_err(|_| GreedyFailure {
                polygon: Polygon::from_cycle(instance.points(), &[0, 1, 2]).unwrap(),
                missing: instance.len(),
            })?;
            greedy_from(instance, start, params)
        }
        Objective::Min => {
            let mut best: Option<Polygon> = None;
            let mut closest: Option<GreedyFailure> = None;
            for t in init_min_triangles(instance).iter().take(params.start_triangles) {
                match greedy_from(instance, triangle_polygon(instance, t), params) {
                    Ok(p) => {
                        if best.as_ref().is_none_or(|b| p.area2() > b.area2()) {
                            best = Some(p);
                        }
                    }
                    Err(f) => {
                        if closest.as_ref().is_none_or(|c| f.missing < c.missing) {
                            closest = Some(f);
                        }
                    }
                }
            }
            best.ok_or_else(|| {
                closest.unwrap_or(GreedyFailure {
                    polygon: Polygon::from_cycle(instance.points(), &[0, 1, 2]).unwrap(),
                    missing: instance.len(),
                })
            })
        }
    }
}

/// SplitMix64 finalizer, used to derive independent seeds.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Parameter sets tried in order after a failure: alpha scaled by 1/3, 3,
/// 1/9 and 9, then sigma 0.3 with five fresh seeds.
pub fn retry_schedule(params: &SolveParams) -> Vec<SolveParams> {
    let mut out = vec![params.clone()];
    for scale in [1.0 / 3.0, 3.0, 1.0 / 9.0, 9.0] {
        out.push(SolveParams { alpha: params.alpha * scale, ..params.clone() });
    }
    for i in 1..=5u64 {
        out.push(SolveParams { sigma: 0.3, seed: mix_seed(params.seed, i), ..params.clone() });
    }
    out
}

#[derive(Clone, Debug)]
pub struct GreedyOutcome {
    pub polygon: Polygon,
    /// Index into [`retry_schedule`] of the attempt that succeeded.
    pub attempt: usize,
}

/// Greedy phase with the failure/retry policy applied.
pub fn run_greedy(instance: &Instance, params: &SolveParams) -> Result<GreedyOutcome, Error> {
    params.validate()?;
    crate::geom::convex_hull(instance.points())?;
    let schedule = retry_schedule(params);
    let mut missing = instance.len();
    for (attempt, p) in schedule.iter().enumerate() {
        match greedy_once(instance, p) {
            Ok(polygon) => return Ok(GreedyOutcome { polygon, attempt }),
            Err(f) => missing = missing.min(f.missing),
        }
    }
    Err(Error::GreedyFailed { attempts: schedule.len(), missing })
}
