//! Instances, polygons, simplicity checks and scoring.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::geom::{self, cross, segments_properly_interact, signed_area2, Point, Segment};
use crate::spatial::{EdgeGrid, EdgeKey};
use crate::Error;

/// A validated point set: at least three points, ids `0..n`, no duplicates,
/// coordinates within the 2^30 bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    points: Vec<Point>,
}

impl Instance {
    /// Builds an instance, assigning ids in input order.
    pub fn new(name: impl Into<String>, coords: &[(i64, i64)]) -> Result<Self, Error> {
        let points = coords.iter().enumerate().map(|(i, &(x, y))| Point::new(i as u32, x, y)).collect();
        Self::from_points(name, points)
    }

    pub fn from_points(name: impl Into<String>, points: Vec<Point>) -> Result<Self, Error> {
        if points.len() < 3 {
            return Err(Error::TooFewPoints(points.len()));
        }
        if points.len() > u32::MAX as usize {
            return Err(Error::InvalidParameter("too many points"));
        }
        for (i, p) in points.iter().enumerate() {
            if p.id as usize != i {
                return Err(Error::VertexOutOfRange(p.id));
            }
            if p.x.abs() > geom::COORD_BOUND || p.y.abs() > geom::COORD_BOUND {
                return Err(Error::CoordinateOutOfRange { id: p.id, x: p.x, y: p.y });
            }
        }
        let mut sorted: Vec<&Point> = points.iter().collect();
        sorted.sort_unstable_by(|p, q| geom::lex_cmp(p, q).then(p.id.cmp(&q.id)));
        for w in sorted.windows(2) {
            if w[0].x == w[1].x && w[0].y == w[1].y {
                return Err(Error::DuplicatePoint { first: w[0].id, second: w[1].id });
            }
        }
        Ok(Instance { name: name.into(), points })
    }

    #[inline]
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Doubled area of the convex hull.
    pub fn hull_area2(&self) -> Result<i128, Error> {
        let hull = geom::convex_hull(&self.points)?;
        Ok(shoelace2(&self.points, hull.iter().map(|&i| i as u32)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Max,
    Min,
}

impl Objective {
    /// Polygon orientation used while solving: counterclockwise (+1) when
    /// maximizing, clockwise (-1) when minimizing. With this orientation both
    /// objectives amount to maximizing the signed doubled area.
    #[inline]
    pub fn orientation(self) -> i128 {
        match self {
            Objective::Max => 1,
            Objective::Min => -1,
        }
    }

    /// True when `a` is a strictly better score than `b`.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Objective::Max => a > b,
            Objective::Min => a < b,
        }
    }
}

pub(crate) const NIL: u32 = u32::MAX;

/// Twice the signed shoelace area of the cycle visiting `ids` in order.
pub fn shoelace2(points: &[Point], ids: impl IntoIterator<Item = u32>) -> i128 {
    let mut it = ids.into_iter();
    let Some(first) = it.next() else { return 0 };
    let mut sum = 0i128;
    let mut prev = first;
    for v in it {
        sum += cross(points[prev as usize], points[v as usize]);
        prev = v;
    }
    sum + cross(points[prev as usize], points[first as usize])
}

/// A polygon over a subset of an instance's points, stored as a doubly
/// linked cycle indexed by point id, with its signed doubled area cached.
#[derive(Clone, Debug)]
pub struct Polygon {
    next: Vec<u32>,
    prev: Vec<u32>,
    len: usize,
    head: u32,
    area2: i128,
}

impl Polygon {
    /// Builds a polygon from a vertex cycle over `points`.
    pub fn from_cycle(points: &[Point], cycle: &[u32]) -> Result<Self, Error> {
        if cycle.len() < 3 {
            return Err(Error::PolygonTooShort(cycle.len()));
        }
        let n = points.len();
        let mut next = vec![NIL; n];
        let mut prev = vec![NIL; n];
        for &v in cycle {
            if v as usize >= n {
                return Err(Error::VertexOutOfRange(v));
            }
            if next[v as usize] != NIL {
                return Err(Error::RepeatedVertex(v));
            }
            next[v as usize] = v;
        }
        for (i, &v) in cycle.iter().enumerate() {
            let w = cycle[(i + 1) % cycle.len()];
            next[v as usize] = w;
            prev[w as usize] = v;
        }
        Ok(Polygon { next, prev, len: cycle.len(), head: cycle[0], area2: shoelace2(points, cycle.iter().copied()) })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Signed doubled area, positive for counterclockwise cycles.
    #[inline]
    pub fn area2(&self) -> i128 {
        self.area2
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.next.get(v as usize).is_some_and(|&w| w != NIL)
    }

    #[inline]
    pub fn next(&self, v: u32) -> u32 {
        self.next[v as usize]
    }

    #[inline]
    pub fn prev(&self, v: u32) -> u32 {
        self.prev[v as usize]
    }

    /// Some vertex of the polygon; traversal starts here.
    pub fn head(&self) -> u32 {
        self.head
    }

    /// Size of the id space (the instance's point count).
    pub fn capacity(&self) -> usize {
        self.next.len()
    }

    pub fn vertices(&self) -> Vertices<'_> {
        Vertices { poly: self, cur: self.head, left: self.len }
    }

    /// Directed edges `(origin, destination)` in cycle order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.vertices().map(move |v| (v, self.next(v)))
    }

    /// Vertex cycle rotated to start at the smallest id, keeping the traversal
    /// direction.
    pub fn canonical_cycle(&self) -> Vec<u32> {
        let start = self.vertices().min().unwrap_or(self.head);
        let mut out = Vec::with_capacity(self.len);
        let mut v = start;
        for _ in 0..self.len {
            out.push(v);
            v = self.next(v);
        }
        out
    }

    /// Splices `q` between `p1` and its successor and returns the new doubled
    /// area. Panics if `q` is already a vertex or `p1` is not.
    pub fn insert_after(&mut self, points: &[Point], p1: u32, q: u32) -> i128 {
        assert!(self.contains(p1), "edge origin {p1} is not a vertex");
        assert!(!self.contains(q), "point {q} is already a vertex");
        let p2 = self.next(p1);
        self.area2 -= signed_area2(points[p1 as usize], points[p2 as usize], points[q as usize]) as i128;
        self.next[p1 as usize] = q;
        self.prev[q as usize] = p1;
        self.next[q as usize] = p2;
        self.prev[p2 as usize] = q;
        self.len += 1;
        self.area2
    }

    /// Detaches the path of `k` vertices starting at `v1` and splices it back,
    /// reversed, between `u1` and its successor. `delta` is the exact change
    /// of doubled area, computed by the caller.
    pub(crate) fn relocate_reversed(&mut self, v1: u32, k: usize, u1: u32, delta: i128) {
        let a = self.prev(v1);
        let mut vk = v1;
        for _ in 1..k {
            vk = self.next(vk);
        }
        let b = self.next(vk);
        self.next[a as usize] = b;
        self.prev[b as usize] = a;
        let mut v = v1;
        for _ in 0..k {
            let after = self.next(v);
            core::mem::swap(&mut self.next[v as usize], &mut self.prev[v as usize]);
            v = after;
        }
        let u2 = self.next(u1);
        self.next[u1 as usize] = vk;
        self.prev[vk as usize] = u1;
        self.next[v1 as usize] = u2;
        self.prev[u2 as usize] = v1;
        self.area2 += delta;
    }

    /// Reverses the traversal direction, negating the area.
    pub fn reverse(&mut self) {
        core::mem::swap(&mut self.next, &mut self.prev);
        self.area2 = -self.area2;
    }

    /// Recomputes the doubled area from scratch.
    pub fn shoelace2(&self, points: &[Point]) -> i128 {
        shoelace2(points, self.vertices())
    }

    /// Position-independent comparison of vertex cycles.
    pub fn same_cycle(&self, other: &Polygon) -> bool {
        self.len == other.len
            && self.capacity() == other.capacity()
            && self.vertices().all(|v| other.contains(v) && other.next(v) == self.next(v))
    }
}

pub struct Vertices<'a> {
    poly: &'a Polygon,
    cur: u32,
    left: usize,
}

impl Iterator for Vertices<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.left == 0 {
            return None;
        }
        let v = self.cur;
        self.cur = self.poly.next(v);
        self.left -= 1;
        Some(v)
    }
}

fn check_cycle(n: usize, cycle: &[u32]) -> Result<(), Error> {
    if cycle.len() < 3 {
        return Err(Error::PolygonTooShort(cycle.len()));
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        let slot = seen.get_mut(v as usize).ok_or(Error::VertexOutOfRange(v))?;
        if core::mem::replace(slot, true) {
            return Err(Error::RepeatedVertex(v));
        }
    }
    Ok(())
}

/// Naive O(m^2) simplicity check of a vertex cycle: every pair of edges is
/// tested with the exact interaction predicate.
pub fn verify_simple_naive(points: &[Point], cycle: &[u32]) -> Result<bool, Error> {
    check_cycle(points.len(), cycle)?;
    let m = cycle.len();
    let seg = |i: usize| Segment::new(points[cycle[i] as usize], points[cycle[(i + 1) % m] as usize]);
    for i in 0..m {
        let s = seg(i);
        for j in i + 1..m {
            if segments_properly_interact(s, seg(j)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Grid-accelerated simplicity check; agrees with [`verify_simple_naive`].
pub fn verify_simple_grid(points: &[Point], cycle: &[u32]) -> Result<bool, Error> {
    check_cycle(points.len(), cycle)?;
    let m = cycle.len();
    let mut grid = EdgeGrid::with_subset(points, cycle);
    for i in 0..m {
        grid.add_edge(cycle[i], cycle[(i + 1) % m]);
    }
    for i in 0..m {
        let (a, b) = (cycle[i], cycle[(i + 1) % m]);
        if grid.any_interaction(a, b, &[EdgeKey::new(a, b)]) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoreReport {
    pub score: f64,
    pub polygon_area2: i128,
    pub hull_area2: i128,
    pub simple: bool,
    pub uses_all_points: bool,
}

/// Scores a vertex cycle: |polygon area| / hull area, computed from exact
/// doubled areas and divided once. Malformed cycles produce a report with
/// `simple = false` rather than an error.
pub fn score_cycle(instance: &Instance, cycle: &[u32]) -> Result<ScoreReport, Error> {
    let points = instance.points();
    let hull_area2 = instance.hull_area2()?;
    let (simple, polygon_area2) = match verify_simple_naive(points, cycle) {
        Ok(simple) => (simple, shoelace2(points, cycle.iter().copied())),
        Err(Error::VertexOutOfRange(v)) => return Err(Error::VertexOutOfRange(v)),
        Err(_) => (false, 0),
    };
    let uses_all_points = cycle.len() == points.len() && check_cycle(points.len(), cycle).is_ok();
    Ok(ScoreReport {
        score: polygon_area2.abs() as f64 / hull_area2 as f64,
        polygon_area2: polygon_area2.abs(),
        hull_area2,
        simple,
        uses_all_points,
    })
}

pub fn score(instance: &Instance, polygon: &Polygon) -> Result<ScoreReport, Error> {
    score_cycle(instance, &polygon.canonical_cycle())
}

pub const BRUTE_FORCE_MAX_POINTS: usize = 10;

/// Exact optimum over every simple polygon through all points, by
/// enumerating vertex cycles with vertex 0 fixed first and one representative
/// per reflection. Only for tiny instances.
pub fn brute_force_optimum(instance: &Instance, objective: Objective) -> Result<(ScoreReport, Vec<u32>), Error> {
    let n = instance.len();
    if n > BRUTE_FORCE_MAX_POINTS {
        return Err(Error::TooManyPoints { n, max: BRUTE_FORCE_MAX_POINTS });
    }
    let points = instance.points();
    let mut rest: Vec<u32> = (1..n as u32).collect();
    let mut best: Option<(i128, Vec<u32>)> = None;
    let mut cycle = vec![0u32; n];
    permute(&mut rest, 0, &mut |perm| {
        if perm[0] > perm[perm.len() - 1] {
            return;
        }
        cycle[1..].copy_from_slice(perm);
        if !verify_simple_naive(points, &cycle).unwrap_or(false) {
            return;
        }
        let area = shoelace2(points, cycle.iter().copied()).abs();
        let improves = match &best {
            None => true,
            Some((b, _)) => match objective {
                Objective::Max => area > *b,
                Objective::Min => area < *b,
            },
        };
        if improves {
            best = Some((area, cycle.clone()));
        }
    });
    let (_, cycle) = best.ok_or(Error::Degenerate)?;
    Ok((score_cycle(instance, &cycle)?, cycle))
}

/// Heap's-style recursive enumeration of all permutations of `items[k..]`.
fn permute(items: &mut [u32], k: usize, visit: &mut impl FnMut(&[u32])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn square_plus(extra: (i64, i64)) -> Instance {
        Instance::new("t", &[(0, 0), (10, 0), (10, 10), (0, 10), extra]).unwrap()
    }

    #[test]
    fn instance_validation() {
        assert_eq!(Instance::new("t", &[(0, 0), (1, 1)]), Err(Error::TooFewPoints(2)));
        assert_eq!(Instance::new("t", &[(0, 0), (1, 1), (0, 0)]), Err(Error::DuplicatePoint { first: 0, second: 2 }));
        assert!(matches!(
            Instance::new("t", &[(0, 0), (1, 1), (1 << 31, 0)]),
            Err(Error::CoordinateOutOfRange { id: 2, .. })
        ));
    }

    #[test]
    fn insert_vertex_updates_area() {
        let inst = square_plus((5, 1));
        let pts = inst.points();
        let mut poly = Polygon::from_cycle(pts, &[0, 1, 2, 3]).unwrap();
        assert_eq!(poly.area2(), 200);
        assert_eq!(poly.insert_after(pts, 0, 4), 190);
        assert_eq!(poly.shoelace2(pts), 190);
        assert_eq!(poly.canonical_cycle(), [0, 4, 1, 2, 3]);

        let inst = square_plus((5, 0));
        let pts = inst.points();
        let mut poly = Polygon::from_cycle(pts, &[0, 1, 2, 3]).unwrap();
        assert_eq!(poly.insert_after(pts, 0, 4), 200);
    }

    #[test]
    #[should_panic]
    fn insert_existing_vertex_panics() {
        let inst = square_plus((5, 1));
        let mut poly = Polygon::from_cycle(inst.points(), &[0, 1, 2, 3]).unwrap();
        poly.insert_after(inst.points(), 0, 2);
    }

    #[test]
    fn exterior_insertion_grows_area() {
        // Triangle plus exterior points, each inserted on the edge nearest to it.
        let mut state = 12345u64;
        let mut rnd = |m: i64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as i64).rem_euclid(m)
        };
        for _ in 0..100 {
            let q = loop {
                let q = (rnd(200) - 50, rnd(200) - 50);
                let inside = q.0 >= 0 && q.1 >= 0 && q.0 + q.1 <= 100;
                if !inside {
                    break q;
                }
            };
            let inst = Instance::new("t", &[(0, 0), (100, 0), (0, 100), q]).unwrap();
            let pts = inst.points();
            let mut poly = Polygon::from_cycle(pts, &[0, 1, 2]).unwrap();
            let before = poly.area2();
            // edge whose supporting line has q strictly on its outer side, closest first
            let edge = (0..3u32)
                .filter(|&v| signed_area2(pts[v as usize], pts[poly.next(v) as usize], pts[3]) < 0)
                .min_by_key(|&v| -signed_area2(pts[v as usize], pts[poly.next(v) as usize], pts[3]))
                .unwrap();
            let after = poly.insert_after(pts, edge, 3);
            assert!(after > before);
            assert_eq!(after, poly.shoelace2(pts));
        }
    }

    #[test]
    fn verify_examples() {
        let inst = square_plus((5, 5));
        let pts = inst.points();
        assert!(verify_simple_naive(pts, &[0, 1, 2, 3]).unwrap());
        assert!(!verify_simple_naive(pts, &[0, 1, 3, 2]).unwrap());
        assert!(verify_simple_grid(pts, &[0, 1, 2, 3]).unwrap());
        assert!(!verify_simple_grid(pts, &[0, 1, 3, 2]).unwrap());
        assert_eq!(verify_simple_naive(pts, &[0, 1, 9]), Err(Error::VertexOutOfRange(9)));
        assert_eq!(verify_simple_naive(pts, &[0, 1, 1]), Err(Error::RepeatedVertex(1)));

        // (5,0) sits in the interior of edge (0,0)-(10,0) without being on it
        let inst = Instance::new("t", &[(0, 0), (10, 0), (10, 10), (5, 0), (0, 10)]).unwrap();
        assert!(!verify_simple_naive(inst.points(), &[0, 1, 2, 3, 4]).unwrap());
        assert!(!verify_simple_grid(inst.points(), &[0, 1, 2, 3, 4]).unwrap());
        assert!(verify_simple_naive(inst.points(), &[0, 3, 1, 2, 4]).unwrap());
    }

    #[test]
    fn score_examples() {
        let inst = square_plus((5, 5));
        let hull = Polygon::from_cycle(inst.points(), &[0, 1, 2, 3]).unwrap();
        let r = score(&inst, &hull).unwrap();
        assert_eq!(r.score, 1.0);
        assert!(r.simple && !r.uses_all_points);

        let r = score_cycle(&inst, &[0, 1, 4, 2, 3]).unwrap();
        assert_eq!(r.score, 0.75);
        assert!(r.simple && r.uses_all_points);

        let inst = square_plus((5, 1));
        let r = score_cycle(&inst, &[0, 4, 1, 2, 3]).unwrap();
        assert_eq!((r.polygon_area2, r.hull_area2), (190, 200));
        assert_eq!(r.score, 0.95);
    }

    #[test]
    fn brute_force_examples() {
        let tri = Instance::new("t", &[(0, 0), (7, 1), (2, 9)]).unwrap();
        for obj in [Objective::Max, Objective::Min] {
            assert_eq!(brute_force_optimum(&tri, obj).unwrap().0.score, 1.0);
        }
        let sq = Instance::new("t", &[(0, 0), (10, 0), (10, 10), (0, 10)]).unwrap();
        for obj in [Objective::Max, Objective::Min] {
            assert_eq!(brute_force_optimum(&sq, obj).unwrap().0.score, 1.0);
        }
        let inst = square_plus((5, 5));
        assert_eq!(brute_force_optimum(&inst, Objective::Min).unwrap().0.score, 0.75);
        assert_eq!(brute_force_optimum(&inst, Objective::Max).unwrap().0.score, 0.75);
        let inst = square_plus((5, 1));
        assert_eq!(brute_force_optimum(&inst, Objective::Max).unwrap().0.score, 0.95);
        assert_eq!(brute_force_optimum(&inst, Objective::Min).unwrap().0.score, 0.55);

        let big: Vec<(i64, i64)> = (0..11).map(|i| (i, i * i)).collect();
        let inst = Instance::new("t", &big).unwrap();
        assert!(matches!(brute_force_optimum(&inst, Objective::Max), Err(Error::TooManyPoints { n: 11, .. })));
    }

    proptest! {
        #[test]
        fn score_invariant_under_rotation_and_reflection(shift in 0usize..5, flip: bool) {
            let inst = square_plus((5, 1));
            let mut cycle = vec![0u32, 4, 1, 2, 3];
            cycle.rotate_left(shift);
            if flip {
                cycle.reverse();
            }
            let r = score_cycle(&inst, &cycle).unwrap();
            prop_assert_eq!(r.score, 0.95);
        }
    }
}
