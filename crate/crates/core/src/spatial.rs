//! Uniform grid over the instance's bounding box.
//!
//! Each cell keeps the polygon edges that touch it and the instance points
//! that fall in it. Edges touching more than [`LONG_EDGE_CELLS`] cells are
//! kept on a separate list that every query scans first. Cells are closed
//! squares with integer corners, so an edge running along a cell boundary is
//! registered on both sides.

use alloc::vec;
use alloc::vec::Vec;

use crate::geom::{segments_properly_interact, Point, Segment};
use crate::params::Hood;

pub const LONG_EDGE_CELLS: usize = 4;
/// Upper bound for a custom long-edge threshold.
pub const MAX_EDGE_CELLS: usize = 16;

/// Undirected edge identity, stored with the smaller id first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    lo: u32,
    hi: u32,
}

impl EdgeKey {
    #[inline]
    pub fn new(a: u32, b: u32) -> Self {
        if a < b {
            EdgeKey { lo: a, hi: b }
        } else {
            EdgeKey { lo: b, hi: a }
        }
    }

    #[inline]
    pub fn ends(self) -> (u32, u32) {
        (self.lo, self.hi)
    }
}

/// Grid resolution for `n` points: `(4n)^(1/4)` rounded half up, at least 1.
pub fn columns_for(n: usize) -> usize {
    let c = libm::floor(libm::sqrt(libm::sqrt(4.0 * n as f64)) + 0.5) as usize;
    c.max(1)
}

#[derive(Clone, Debug)]
pub struct EdgeGrid<'a> {
    points: &'a [Point],
    min_x: i64,
    min_y: i64,
    columns: usize,
    cell_size: i64,
    long_cells: usize,
    cells: Vec<Vec<EdgeKey>>,
    long_edges: Vec<EdgeKey>,
    bins: Vec<Vec<u32>>,
}

#[inline]
fn orient_wide(ax: i64, ay: i64, bx: i64, by: i64, cx: i64, cy: i64) -> i128 {
    (bx - ax) as i128 * (cy - ay) as i128 - (by - ay) as i128 * (cx - ax) as i128
}

impl<'a> EdgeGrid<'a> {
    /// Grid over every point of the slice.
    pub fn new(points: &'a [Point]) -> Self {
        let ids: Vec<u32> = points.iter().map(|p| p.id).collect();
        Self::with_subset(points, &ids)
    }

    /// Grid sized and binned for a subset of the points; edges may still use
    /// any point of the slice.
    pub fn with_subset(points: &'a [Point], ids: &[u32]) -> Self {
        Self::with_layout(points, ids, columns_for(ids.len()), LONG_EDGE_CELLS)
    }

    /// Grid with an explicit resolution and long-edge threshold
    /// (at most [`MAX_EDGE_CELLS`]).
    pub fn with_layout(points: &'a [Point], ids: &[u32], columns: usize, long_cells: usize) -> Self {
        assert!((1..=MAX_EDGE_CELLS).contains(&long_cells), "long-edge threshold out of range");
        let columns = columns.max(1);
        let (mut min_x, mut min_y, mut max_x, mut max_y) = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
        for &i in ids {
            let p = points[i as usize];
            min_x = min_x.min(p.x);
            min_y = min_y.min(p.y);
            max_x = max_x.max(p.x);
            max_y = max_y.max(p.y);
        }
        if ids.is_empty() {
            (min_x, min_y, max_x, max_y) = (0, 0, 0, 0);
        }
        let side = (max_x - min_x).max(max_y - min_y);
        let cell_size = side / columns as i64 + 1;
        let mut grid = EdgeGrid {
            points,
            min_x,
            min_y,
            columns,
            cell_size,
            long_cells,
            cells: vec![Vec::new(); columns * columns],
            long_edges: Vec::new(),
            bins: vec![Vec::new(); columns * columns],
        };
        for &i in ids {
            let c = grid.cell_of(points[i as usize]);
            grid.bins[c].push(i);
        }
        grid
    }

    pub fn points(&self) -> &'a [Point] {
        self.points
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn cell_size(&self) -> i64 {
        self.cell_size
    }

    /// Cell holding a point of the bounding box (half-open binning).
    pub fn cell_of(&self, p: Point) -> usize {
        let cx = ((p.x - self.min_x) / self.cell_size).clamp(0, self.columns as i64 - 1) as usize;
        let cy = ((p.y - self.min_y) / self.cell_size).clamp(0, self.columns as i64 - 1) as usize;
        cy * self.columns + cx
    }

    pub fn bin(&self, cell: usize) -> &[u32] {
        &self.bins[cell]
    }

    pub fn cell_edges(&self, cell: usize) -> &[EdgeKey] {
        &self.cells[cell]
    }

    pub fn long_edges(&self) -> &[EdgeKey] {
        &self.long_edges
    }

    /// Closed box `[x0, x1] x [y0, y1]` of a cell.
    pub fn cell_box(&self, cell: usize) -> (i64, i64, i64, i64) {
        let (cx, cy) = ((cell % self.columns) as i64, (cell / self.columns) as i64);
        let x0 = self.min_x + cx * self.cell_size;
        let y0 = self.min_y + cy * self.cell_size;
        (x0, y0, x0 + self.cell_size, y0 + self.cell_size)
    }

    fn extent(&self) -> i64 {
        self.columns as i64 * self.cell_size
    }

    /// Cells along one axis whose closed interval meets `[lo, hi]` (relative
    /// to the grid origin).
    fn axis_range(&self, lo: i64, hi: i64) -> Option<(usize, usize)> {
        if hi < 0 || lo > self.extent() {
            return None;
        }
        let last_cell = self.columns - 1;
        let first = if lo <= 0 {
            0
        } else if lo % self.cell_size == 0 {
            (lo / self.cell_size - 1) as usize
        } else {
            (lo / self.cell_size) as usize
        };
        let last = ((hi / self.cell_size) as usize).min(last_cell);
        Some((first.min(last_cell), last))
    }

    /// Exact test: does segment `ab` meet the closed box of `cell`?
    pub fn segment_meets_cell(&self, a: Point, b: Point, cell: usize) -> bool {
        let (x0, y0, x1, y1) = self.cell_box(cell);
        if a.x.max(b.x) < x0 || a.x.min(b.x) > x1 || a.y.max(b.y) < y0 || a.y.min(b.y) > y1 {
            return false;
        }
        let mut pos = false;
        let mut neg = false;
        for (cx, cy) in [(x0, y0), (x1, y0), (x1, y1), (x0, y1)] {
            let o = orient_wide(a.x, a.y, b.x, b.y, cx, cy);
            pos |= o >= 0;
            neg |= o <= 0;
        }
        pos && neg
    }

    /// Visits the cells met by segment `ab` in row-major order until `visit`
    /// returns false.
    fn trace(&self, a: Point, b: Point, mut visit: impl FnMut(usize) -> bool) {
        let Some((cx0, cx1)) = self.axis_range(a.x.min(b.x) - self.min_x, a.x.max(b.x) - self.min_x) else {
            return;
        };
        let Some((cy0, cy1)) = self.axis_range(a.y.min(b.y) - self.min_y, a.y.max(b.y) - self.min_y) else {
            return;
        };
        for cy in cy0..=cy1 {
            for cx in cx0..=cx1 {
                let cell = cy * self.columns + cx;
                if self.segment_meets_cell(a, b, cell) && !visit(cell) {
                    return;
                }
            }
        }
    }

    /// All cells met by the segment between two point ids.
    pub fn cells_of_segment(&self, a: u32, b: u32) -> Vec<usize> {
        let mut out = Vec::new();
        self.trace(self.points[a as usize], self.points[b as usize], |c| {
            out.push(c);
            true
        });
        out
    }

    fn inside(&self, p: Point) -> bool {
        let e = self.extent();
        (0..=e).contains(&(p.x - self.min_x)) && (0..=e).contains(&(p.y - self.min_y))
    }

    /// Cells an edge is registered in, or `None` when it belongs on the
    /// long-edge list.
    fn placement(&self, a: u32, b: u32) -> Option<([usize; MAX_EDGE_CELLS], usize)> {
        let (pa, pb) = (self.points[a as usize], self.points[b as usize]);
        if !self.inside(pa) || !self.inside(pb) {
            return None;
        }
        let mut cells = [0usize; MAX_EDGE_CELLS];
        let mut count = 0;
        self.trace(pa, pb, |c| {
            if count == self.long_cells {
                count += 1;
                return false;
            }
            cells[count] = c;
            count += 1;
            true
        });
        (count <= self.long_cells).then_some((cells, count))
    }

    pub fn add_edge(&mut self, a: u32, b: u32) {
        let key = EdgeKey::new(a, b);
        match self.placement(a, b) {
            Some((cells, count)) => {
                for &c in &cells[..count] {
                    self.cells[c].push(key);
                }
            }
            None => self.long_edges.push(key),
        }
    }

    /// Removes an edge previously added. Panics if it is not registered.
    pub fn remove_edge(&mut self, a: u32, b: u32) {
        let key = EdgeKey::new(a, b);
        let take = |list: &mut Vec<EdgeKey>| {
            let pos = list.iter().position(|&k| k == key).unwrap_or_else(|| panic!("edge {a}-{b} is not registered"));
            list.swap_remove(pos);
        };
        match self.placement(a, b) {
            Some((cells, count)) => {
                for &c in &cells[..count] {
                    take(&mut self.cells[c]);
                }
            }
            None => take(&mut self.long_edges),
        }
    }

    #[inline]
    fn segment(&self, key: EdgeKey) -> Segment {
        Segment::new(self.points[key.lo as usize], self.points[key.hi as usize])
    }

    /// True iff some registered edge outside `skip` interacts with segment
    /// `ab`. Long edges are tested first, then the edges of every cell the
    /// segment crosses.
    pub fn any_interaction(&self, a: u32, b: u32, skip: &[EdgeKey]) -> bool {
        let probe = Segment::new(self.points[a as usize], self.points[b as usize]);
        let hits = |key: &EdgeKey| !skip.contains(key) && segments_properly_interact(probe, self.segment(*key));
        if self.long_edges.iter().any(hits) {
            return true;
        }
        let mut found = false;
        self.trace(probe.a, probe.b, |c| {
            found = self.cells[c].iter().any(hits);
            !found
        });
        found
    }

    /// Non-empty cells within Chebyshev distance `kappa` of `cell`.
    pub fn neighborhood(&self, cell: usize, kappa: u32) -> Vec<usize> {
        let mut out = Vec::new();
        self.push_neighborhood(cell, kappa, &mut out);
        out.retain(|&c| !self.bins[c].is_empty());
        out
    }

    fn push_neighborhood(&self, cell: usize, kappa: u32, out: &mut Vec<usize>) {
        let k = kappa.min(self.columns as u32) as usize;
        let (cx, cy) = (cell % self.columns, cell / self.columns);
        let last = self.columns - 1;
        for y in cy.saturating_sub(k)..=(cy + k).min(last) {
            for x in cx.saturating_sub(k)..=(cx + k).min(last) {
                out.push(y * self.columns + x);
            }
        }
    }

    /// Point ids binned in the `hood`-neighborhood of the cells met by `ab`.
    pub fn candidate_points(&self, a: u32, b: u32, hood: Hood) -> Vec<u32> {
        let kappa = match hood {
            Hood::Infinite => return self.bins.iter().flatten().copied().collect(),
            Hood::Cells(k) => k,
        };
        let mut cells = Vec::new();
        self.trace(self.points[a as usize], self.points[b as usize], |c| {
            self.push_neighborhood(c, kappa, &mut cells);
            true
        });
        cells.sort_unstable();
        cells.dedup();
        let mut out = Vec::new();
        for c in cells {
            out.extend_from_slice(&self.bins[c]);
        }
        out
    }

    /// Registered edges in the `hood`-neighborhood of the cell containing
    /// point `p`, plus every long edge. Sorted and deduplicated.
    pub fn edges_near(&self, p: u32, hood: Hood, out: &mut Vec<EdgeKey>) {
        out.clear();
        out.extend_from_slice(&self.long_edges);
        match hood {
            Hood::Infinite => {
                for cell in &self.cells {
                    out.extend_from_slice(cell);
                }
            }
            Hood::Cells(k) => {
                let mut cells = Vec::new();
                self.push_neighborhood(self.cell_of(self.points[p as usize]), k, &mut cells);
                for c in cells {
                    out.extend_from_slice(&self.cells[c]);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
    }

    /// Sorted contents of every cell and of the long-edge list.
    pub fn snapshot(&self) -> (Vec<Vec<EdgeKey>>, Vec<EdgeKey>) {
        let mut cells = self.cells.clone();
        for c in &mut cells {
            c.sort_unstable();
        }
        let mut long = self.long_edges.clone();
        long.sort_unstable();
        (cells, long)
    }
}
