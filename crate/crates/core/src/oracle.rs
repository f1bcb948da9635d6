//! Slow, independent reference implementations used to check the fast paths.
//!
//! Nothing here shares code with the predicates or data structures under
//! test beyond the point type and the weight function.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::geom::Point;
use crate::greedy::{penalty_unit, weight};
use crate::model::{Instance, Objective, Polygon};
use crate::params::SolveParams;

/// Exact rational number with positive denominator.
#[derive(Clone, Copy, Debug)]
struct Q {
    num: i128,
    den: i128,
}

impl Q {
    fn new(num: i128, den: i128) -> Q {
        if den < 0 {
            Q { num: -num, den: -den }
        } else {
            Q { num, den }
        }
    }

    fn cmp(self, o: Q) -> Ordering {
        (self.num * o.den).cmp(&(o.num * self.den))
    }
}

/// Liang-Barsky clipping of segment `ab` against a closed box, in exact
/// rational arithmetic.
pub fn segment_meets_box(a: Point, b: Point, bx: (i64, i64, i64, i64)) -> bool {
    let (x0, y0, x1, y1) = bx;
    let (dx, dy) = ((b.x - a.x) as i128, (b.y - a.y) as i128);
    let mut lo = Q::new(0, 1);
    let mut hi = Q::new(1, 1);
    let checks =
        [(-dx, (a.x - x0) as i128), (dx, (x1 - a.x) as i128), (-dy, (a.y - y0) as i128), (dy, (y1 - a.y) as i128)];
    for (p, q) in checks {
        if p == 0 {
            if q < 0 {
                return false;
            }
            continue;
        }
        let r = Q::new(q, p);
        if p < 0 {
            if r.cmp(lo) == Ordering::Greater {
                lo = r;
            }
        } else if r.cmp(hi) == Ordering::Less {
            hi = r;
        }
    }
    lo.cmp(hi) != Ordering::Greater
}

fn cross2(ax: i128, ay: i128, bx: i128, by: i128) -> i128 {
    ax * by - ay * bx
}

/// Interaction of two closed segments computed from their exact intersection
/// set: the segments interact unless they are disjoint or meet in a single
/// point that is an endpoint id they share.
pub fn interact_rational(s: (Point, Point), t: (Point, Point)) -> bool {
    let (p, p2) = s;
    let (q, q2) = t;
    let shared: Vec<Point> = [p, p2].into_iter().filter(|e| e.id == q.id || e.id == q2.id).collect();
    if shared.len() == 2 {
        return true;
    }
    let (rx, ry) = ((p2.x - p.x) as i128, (p2.y - p.y) as i128);
    let (wx, wy) = ((q2.x - q.x) as i128, (q2.y - q.y) as i128);
    let (qpx, qpy) = ((q.x - p.x) as i128, (q.y - p.y) as i128);
    // point p + (num/den) r equals shared endpoint?
    let is_shared = |num: i128, den: i128| {
        shared.iter().any(|e| {
            (p.x as i128 - e.x as i128) * den + num * rx == 0 && (p.y as i128 - e.y as i128) * den + num * ry == 0
        })
    };
    let denom = cross2(rx, ry, wx, wy);
    if denom != 0 {
        let t = Q::new(cross2(qpx, qpy, wx, wy), denom);
        let u = Q::new(cross2(qpx, qpy, rx, ry), denom);
        let unit = |v: Q| v.num >= 0 && v.num <= v.den;
        if !unit(t) || !unit(u) {
            return false;
        }
        return !is_shared(t.num, t.den);
    }
    if cross2(qpx, qpy, rx, ry) != 0 {
        return false;
    }
    // collinear: project t's endpoints on s's parameter
    let rr = rx * rx + ry * ry;
    let t0 = Q::new(qpx * rx + qpy * ry, rr);
    let t1 = Q::new((qpx + wx) * rx + (qpy + wy) * ry, rr);
    let (a, b) = if t0.cmp(t1) == Ordering::Greater { (t1, t0) } else { (t0, t1) };
    let lo = if a.cmp(Q::new(0, 1)) == Ordering::Greater { a } else { Q::new(0, 1) };
    let hi = if b.cmp(Q::new(1, 1)) == Ordering::Less { b } else { Q::new(1, 1) };
    match lo.cmp(hi) {
        Ordering::Greater => false,
        Ordering::Equal => !is_shared(lo.num, lo.den),
        Ordering::Less => true,
    }
}

/// Linear scan over an explicit edge list.
pub fn naive_any_interaction(points: &[Point], edges: &[(u32, u32)], a: u32, b: u32, skip: &[(u32, u32)]) -> bool {
    let probe = (points[a as usize], points[b as usize]);
    edges.iter().any(|&(u, v)| {
        let skipped = skip.iter().any(|&(s, t)| (s, t) == (u, v) || (t, s) == (u, v));
        !skipped && interact_rational(probe, (points[u as usize], points[v as usize]))
    })
}

/// Greedy insertion by exhaustive scan: every step evaluates all
/// (edge, point) pairs, sorts them by (weight, point id, edge origin) and
/// inserts the first one that keeps the polygon simple, checked against the
/// full edge list. Pairs rejected for an edge stay rejected while that edge
/// exists, matching how a popped triple is discarded. Deterministic weights
/// only (sigma must be zero).
pub fn scan_greedy(instance: &Instance, start: Polygon, params: &SolveParams) -> Result<Polygon, Polygon> {
    assert_eq!(params.sigma, 0.0);
    let pts = instance.points();
    let n = pts.len() as u32;
    let mut poly = start;
    let mut rejected: BTreeSet<(u32, u32, u32)> = BTreeSet::new();
    let alpha = params.alpha * penalty_unit(instance.hull_area2().unwrap_or(0), pts.len());
    while poly.len() < pts.len() {
        let mut cands: Vec<(f64, u32, u32, u32)> = Vec::new();
        for (p1, p2) in poly.edges() {
            for q in 0..n {
                if poly.contains(q) || rejected.contains(&(p1, p2, q)) {
                    continue;
                }
                let (a, b, c) = (pts[p1 as usize], pts[p2 as usize], pts[q as usize]);
                let sa = (b.x - a.x) as i128 * (c.y - a.y) as i128 - (b.y - a.y) as i128 * (c.x - a.x) as i128;
                if params.objective == Objective::Min && sa <= 0 {
                    continue;
                }
                cands.push((weight(a, b, c, alpha, params.weight_variant), q, p1, p2));
            }
        }
        cands.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        let edges: Vec<(u32, u32)> = poly.edges().collect();
        let mut inserted = false;
        for (_, q, p1, p2) in cands {
            let (a, b, c) = (pts[p1 as usize], pts[p2 as usize], pts[q as usize]);
            let sa = (b.x - a.x) as i128 * (c.y - a.y) as i128 - (b.y - a.y) as i128 * (c.x - a.x) as i128;
            let new_area = poly.area2() - sa;
            let sign_ok = new_area * params.objective.orientation() > 0;
            let ok = sign_ok
                && !interact_rational((a, c), (c, b))
                && !naive_any_interaction(pts, &edges, p1, q, &[(p1, p2)])
                && !naive_any_interaction(pts, &edges, q, p2, &[(p1, p2)]);
            if ok {
                poly.insert_after(pts, p1, q);
                inserted = true;
                break;
            }
            rejected.insert((p1, p2, q));
        }
        if !inserted {
            return Err(poly);
        }
    }
    Ok(poly)
}

/// Total weight of a minimum spanning forest by Kruskal's algorithm.
pub fn kruskal_weight(vertices: usize, edges: &[(usize, usize, i128)]) -> i128 {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut sorted = edges.to_vec();
    sorted.sort_by_key(|e| e.2);
    let mut total = 0;
    for (a, b, w) in sorted {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            total += w;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{segments_properly_interact, Segment};
    use proptest::prelude::*;

    fn pt(id: u32, (x, y): (i64, i64)) -> Point {
        Point::new(id, x, y)
    }

    #[test]
    fn clip_examples() {
        let a = pt(0, (0, 0));
        let b = pt(1, (10, 10));
        assert!(segment_meets_box(a, b, (5, 5, 6, 6)));
        assert!(segment_meets_box(a, b, (10, 10, 12, 12)));
        assert!(!segment_meets_box(a, b, (6, 0, 9, 4)));
    }

    fn small() -> impl Strategy<Value = (i64, i64)> {
        (-3i64..4, -3i64..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20_000))]

        // Ids are shared exactly when coordinates coincide, like in a real instance.
        #[test]
        fn predicate_matches_rational_oracle(a in small(), b in small(), c in small(), d in small()) {
            let mut ids: Vec<(i64, i64)> = Vec::new();
            let mut id = |p: (i64, i64)| {
                let pos = ids.iter().position(|&q| q == p).unwrap_or_else(|| { ids.push(p); ids.len() - 1 });
                pt(pos as u32, p)
            };
            let (pa, pb, pc, pd) = (id(a), id(b), id(c), id(d));
            prop_assume!(pa.id != pb.id && pc.id != pd.id);
            prop_assert_eq!(
                segments_properly_interact(Segment::new(pa, pb), Segment::new(pc, pd)),
                interact_rational((pa, pb), (pc, pd))
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20_000))]

        #[test]
        fn predicate_matches_rational_oracle_wide(
            a in (-1000i64..1000, -1000i64..1000), b in (-1000i64..1000, -1000i64..1000),
            c in (-1000i64..1000, -1000i64..1000), d in (-1000i64..1000, -1000i64..1000),
        ) {
            prop_assume!(a != b && c != d && a != c && a != d && b != c && b != d);
            let (pa, pb, pc, pd) = (pt(0, a), pt(1, b), pt(2, c), pt(3, d));
            prop_assert_eq!(
                segments_properly_interact(Segment::new(pa, pb), Segment::new(pc, pd)),
                interact_rational((pa, pb), (pc, pd))
            );
        }
    }
}
