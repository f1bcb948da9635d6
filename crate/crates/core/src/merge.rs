//! Divide and conquer for very large instances.
//!
//! The bounding box is cut into a `g x g` grid of half-open cells, each cell
//! is solved on its own, and neighboring cell polygons are joined by
//! bridges. A bridge between edge `a -> b` of one polygon and `c -> d` of
//! another replaces both edges by `a -> d` and `c -> b`; the two cycles become
//! one and the doubled area changes by the signed area of the quadrilateral
//! `a d c b`. The bridges used form a minimum spanning tree (Prim) of the
//! graph whose vertices are cells.
//!
//! Cells with fewer than three points, or only collinear points, get no
//! polygon. Their points are inserted greedily into the merged polygon at
//! the end.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::geom::{convex_hull, cross, segments_properly_interact, Point, Segment};
use crate::greedy::{penalty_unit, weight};
use crate::model::{Instance, Objective, Polygon};
use crate::params::{Hood, SolveParams};
use crate::spatial::{EdgeGrid, EdgeKey};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub g: usize,
    /// Point ids per cell in row-major order, increasing. Degenerate cells
    /// are left empty.
    pub cells: Vec<Vec<u32>>,
    /// Points of degenerate cells.
    pub leftovers: Vec<u32>,
}

impl Partition {
    pub fn active_cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.cells.len()).filter(|&c| !self.cells[c].is_empty())
    }
}

fn axis_cell(v: i64, min: i64, span: i64, g: usize) -> usize {
    ((v - min) as i128 * g as i128 / (span as i128 + 1)) as usize
}

pub fn partition(instance: &Instance, g: usize) -> Result<Partition, Error> {
    if g == 0 {
        return Err(Error::InvalidParameter("grid size must be positive"));
    }
    let pts = instance.points();
    let (min_x, max_x) = pts.iter().fold((i64::MAX, i64::MIN), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)));
    let (min_y, max_y) = pts.iter().fold((i64::MAX, i64::MIN), |(lo, hi), p| (lo.min(p.y), hi.max(p.y)));
    let mut cells = vec![Vec::new(); g * g];
    for p in pts {
        let cx = axis_cell(p.x, min_x, max_x - min_x, g);
        let cy = axis_cell(p.y, min_y, max_y - min_y, g);
        cells[cy * g + cx].push(p.id);
    }
    let mut leftovers = Vec::new();
    for cell in &mut cells {
        if cell.is_empty() {
            continue;
        }
        let sub: Vec<Point> = cell.iter().map(|&i| pts[i as usize]).collect();
        if sub.len() < 3 || convex_hull(&sub).is_err() {
            leftovers.append(cell);
        }
    }
    leftovers.sort_unstable();
    Ok(Partition { g, cells, leftovers })
}

/// The points of one cell as a standalone instance; local id `i` is `ids[i]`.
pub fn cell_instance(instance: &Instance, ids: &[u32]) -> Result<Instance, Error> {
    let pts = instance.points();
    let local =
        ids.iter().enumerate().map(|(i, &id)| Point::new(i as u32, pts[id as usize].x, pts[id as usize].y)).collect();
    Instance::from_points(instance.name.clone(), local)
}

/// A solved cell, in global ids and oriented for the objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellPolygon {
    pub cell: usize,
    pub cycle: Vec<u32>,
    pub area2: i128,
}

impl CellPolygon {
    /// Maps a polygon solved on [`cell_instance`] back to global ids.
    pub fn lift(cell: usize, ids: &[u32], local: &Polygon) -> Self {
        CellPolygon {
            cell,
            cycle: local.canonical_cycle().iter().map(|&v| ids[v as usize]).collect(),
            area2: local.area2(),
        }
    }
}

/// Solves every active cell in row-major order with `solve_cell`.
pub fn partition_solve(
    instance: &Instance,
    params: &SolveParams,
    g: usize,
    mut solve_cell: impl FnMut(&Instance, &SolveParams) -> Result<Polygon, Error>,
) -> Result<(Partition, Vec<CellPolygon>), Error> {
    let part = partition(instance, g)?;
    let mut solved = Vec::new();
    for c in part.active_cells() {
        let ids = &part.cells[c];
        let sub = cell_instance(instance, ids)?;
        let poly = solve_cell(&sub, params)?;
        solved.push(CellPolygon::lift(c, ids, &poly));
    }
    Ok((part, solved))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bridge {
    /// Indices into the cell polygon list.
    pub from: usize,
    pub to: usize,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    /// Signed doubled area of the quadrilateral `a d c b`: the change of
    /// doubled area when the bridge is spliced in.
    pub area2: i128,
}

impl Bridge {
    /// Spanning-tree weight: smaller means more area gained when
    /// maximizing and less area added when minimizing.
    pub fn tree_weight(&self) -> i128 {
        -self.area2
    }
}

/// Best valid bridge between `p1` and `p2`. `grid` holds every edge the
/// bridge must avoid, `used` marks edge origins already taken by bridges.
/// Ties go to the lower edge positions in the two cycles.
pub fn best_bridge(
    points: &[Point],
    (i1, p1): (usize, &CellPolygon),
    (i2, p2): (usize, &CellPolygon),
    grid: &EdgeGrid<'_>,
    used: &[bool],
    objective: Objective,
) -> Option<Bridge> {
    let p = |v: u32| points[v as usize];
    let (m1, m2) = (p1.cycle.len(), p2.cycle.len());
    let mut cands: Vec<(Reverse<i128>, usize, usize)> = Vec::new();
    for i in 0..m1 {
        let (a, b) = (p1.cycle[i], p1.cycle[(i + 1) % m1]);
        if used[a as usize] {
            continue;
        }
        let base1 = cross(p(a), p(b));
        for j in 0..m2 {
            let (c, d) = (p2.cycle[j], p2.cycle[(j + 1) % m2]);
            if used[c as usize] {
                continue;
            }
            let q = cross(p(a), p(d)) + cross(p(c), p(b)) - base1 - cross(p(c), p(d));
            if q * objective.orientation() > 0 {
                cands.push((Reverse(q), i, j));
            }
        }
    }
    cands.sort_unstable();
    cands.into_iter().find_map(|(Reverse(q), i, j)| {
        let (a, b) = (p1.cycle[i], p1.cycle[(i + 1) % m1]);
        let (c, d) = (p2.cycle[j], p2.cycle[(j + 1) % m2]);
        if segments_properly_interact(Segment::new(p(a), p(d)), Segment::new(p(c), p(b))) {
            return None;
        }
        let skip = [EdgeKey::new(a, b), EdgeKey::new(c, d)];
        if grid.any_interaction(a, d, &skip) || grid.any_interaction(c, b, &skip) {
            return None;
        }
        Some(Bridge { from: i1, to: i2, a, b, c, d, area2: q })
    })
}

/// Minimum spanning tree by Prim's algorithm from vertex 0. Ties go to the
/// lower edge index. Returns the chosen edge indices in the order they were
/// added, or the number of connected components if the graph is
/// disconnected.
pub fn prim(vertices: usize, edges: &[(usize, usize, i128)]) -> Result<Vec<usize>, usize> {
    if vertices == 0 {
        return Ok(Vec::new());
    }
    let mut adj = vec![Vec::new(); vertices];
    for (e, &(u, v, _)) in edges.iter().enumerate() {
        adj[u].push(e);
        adj[v].push(e);
    }
    let mut inside = vec![false; vertices];
    let mut heap = BinaryHeap::new();
    let mut tree = Vec::with_capacity(vertices - 1);
    let visit = |v: usize, inside: &mut Vec<bool>, heap: &mut BinaryHeap<Reverse<(i128, usize)>>| {
        inside[v] = true;
        for &e in &adj[v] {
            heap.push(Reverse((edges[e].2, e)));
        }
    };
    visit(0, &mut inside, &mut heap);
    while let Some(Reverse((_, e))) = heap.pop() {
        let (u, v, _) = edges[e];
        let fresh = match (inside[u], inside[v]) {
            (true, false) => v,
            (false, true) => u,
            _ => continue,
        };
        tree.push(e);
        visit(fresh, &mut inside, &mut heap);
    }
    if tree.len() + 1 == vertices {
        Ok(tree)
    } else {
        Err(components(vertices, edges))
    }
}

fn components(vertices: usize, edges: &[(usize, usize, i128)]) -> usize {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut count = vertices;
    for &(u, v, _) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            count -= 1;
        }
    }
    count
}

#[derive(Clone, Debug)]
pub struct Merged {
    pub polygon: Polygon,
    /// Every bridge computed, in computation order.
    pub bridges: Vec<Bridge>,
    /// Indices into `bridges` of the spanning tree.
    pub tree: Vec<usize>,
    pub cell_area2: i128,
    pub bridge_area2: i128,
    /// Area change from inserting the leftover points.
    pub leftover_area2: i128,
}

impl Merged {
    pub fn tree_weight(&self) -> i128 {
        self.tree.iter().map(|&e| self.bridges[e].tree_weight()).sum()
    }

    /// Bridge graph as `(from, to, weight)` triples over cell polygon indices.
    pub fn graph(&self) -> Vec<(usize, usize, i128)> {
        self.bridges.iter().map(|b| (b.from, b.to, b.tree_weight())).collect()
    }
}

/// Nearest active cell to the right in the same row and below in the same
/// column, as indices into `cells` (which is sorted by cell).
fn neighbors(cells: &[CellPolygon], g: usize) -> Vec<(usize, usize)> {
    let mut index = vec![usize::MAX; g * g];
    for (i, c) in cells.iter().enumerate() {
        index[c.cell] = i;
    }
    let mut out = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        let (x, y) = (c.cell % g, c.cell / g);
        if let Some(j) = (x + 1..g).map(|x2| index[y * g + x2]).find(|&j| j != usize::MAX) {
            out.push((i, j));
        }
        if let Some(j) = (y + 1..g).map(|y2| index[y2 * g + x]).find(|&j| j != usize::MAX) {
            out.push((i, j));
        }
    }
    out
}

/// Joins the cell polygons into one polygon and inserts the leftover points.
pub fn merge_all(
    instance: &Instance,
    part: &Partition,
    cells: &[CellPolygon],
    params: &SolveParams,
) -> Result<Merged, Error> {
    let pts = instance.points();
    let n = pts.len();
    if cells.is_empty() {
        return Err(Error::Degenerate);
    }
    debug_assert!(cells.windows(2).all(|w| w[0].cell < w[1].cell));
    let mut next = vec![u32::MAX; n];
    let mut grid = EdgeGrid::new(pts);
    for c in cells {
        for (i, &v) in c.cycle.iter().enumerate() {
            let w = c.cycle[(i + 1) % c.cycle.len()];
            next[v as usize] = w;
            grid.add_edge(v, w);
        }
    }

    let mut used = vec![false; n];
    let mut bridges = Vec::new();
    for (i, j) in neighbors(cells, part.g) {
        if let Some(br) = best_bridge(pts, (i, &cells[i]), (j, &cells[j]), &grid, &used, params.objective) {
            used[br.a as usize] = true;
            used[br.c as usize] = true;
            grid.add_edge(br.a, br.d);
            grid.add_edge(br.c, br.b);
            bridges.push(br);
        }
    }
    let graph: Vec<(usize, usize, i128)> = bridges.iter().map(|b| (b.from, b.to, b.tree_weight())).collect();
    let tree = prim(cells.len(), &graph).map_err(|components| Error::Disconnected { components })?;

    for &e in &tree {
        let br = bridges[e];
        debug_assert!(next[br.a as usize] == br.b && next[br.c as usize] == br.d);
        next[br.a as usize] = br.d;
        next[br.c as usize] = br.b;
    }
    let start = cells[0].cycle[0];
    let mut cycle = vec![start];
    let mut v = next[start as usize];
    while v != start {
        cycle.push(v);
        v = next[v as usize];
    }
    let mut polygon = Polygon::from_cycle(pts, &cycle)?;
    let cell_area2: i128 = cells.iter().map(|c| c.area2).sum();
    let bridge_area2: i128 = tree.iter().map(|&e| bridges[e].area2).sum();
    debug_assert_eq!(polygon.area2(), cell_area2 + bridge_area2);

    let before = polygon.area2();
    insert_leftovers(instance, &mut polygon, &part.leftovers, params)?;
    Ok(Merged { leftover_area2: polygon.area2() - before, polygon, bridges, tree, cell_area2, bridge_area2 })
}

/// Inserts each leftover point, in id order, on the cheapest edge near it
/// that keeps the polygon simple. Falls back to every edge when nothing
/// nearby works.
fn insert_leftovers(
    instance: &Instance,
    polygon: &mut Polygon,
    leftovers: &[u32],
    params: &SolveParams,
) -> Result<(), Error> {
    if leftovers.is_empty() {
        return Ok(());
    }
    let pts = instance.points();
    let mut grid = EdgeGrid::new(pts);
    for (a, b) in polygon.edges() {
        grid.add_edge(a, b);
    }
    let mut pending: Vec<u32> = leftovers.to_vec();
    let alpha = params.alpha * penalty_unit(instance.hull_area2()?, pts.len());
    let mut near = Vec::new();
    // A point may only become placeable after others went in.
    loop {
        let before = pending.len();
        let mut still = Vec::new();
        for &q in &pending {
            let mut best: Option<(f64, u32, u32)> = None;
            for hood in [params.hood, Hood::Infinite] {
                grid.edges_near(q, hood, &mut near);
                for key in &near {
                    let (lo, hi) = key.ends();
                    let (p1, p2) = if polygon.next(lo) == hi { (lo, hi) } else { (hi, lo) };
                    let (a, b, c) = (pts[p1 as usize], pts[p2 as usize], pts[q as usize]);
                    let lost = crate::geom::signed_area2(a, b, c) as i128;
                    if params.objective == Objective::Min && lost <= 0 {
                        continue;
                    }
                    if (polygon.area2() - lost) * params.objective.orientation() <= 0 {
                        continue;
                    }
                    let w = weight(a, b, c, alpha, params.weight_variant);
                    if best.is_some_and(|(bw, bq, _)| (bw, bq) <= (w, p1)) {
                        continue;
                    }
                    let skip = [*key];
                    if segments_properly_interact(Segment::new(a, c), Segment::new(c, b))
                        || grid.any_interaction(p1, q, &skip)
                        || grid.any_interaction(q, p2, &skip)
                    {
                        continue;
                    }
                    best = Some((w, p1, p2));
                }
                if best.is_some() {
                    break;
                }
            }
            match best {
                Some((_, p1, p2)) => {
                    polygon.insert_after(pts, p1, q);
                    grid.remove_edge(p1, p2);
                    grid.add_edge(p1, q);
                    grid.add_edge(q, p2);
                }
                None => still.push(q),
            }
        }
        pending = still;
        if pending.is_empty() {
            return Ok(());
        }
        if pending.len() == before {
            return Err(Error::LeftoverInsertion { missing: pending.len() });
        }
    }
}
