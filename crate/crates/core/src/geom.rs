//! Exact predicates on integer points.
//!
//! Orientation and intersection tests never round: with coordinates bounded
//! by 2^30 every cross product fits in an `i64`. Floating point is only used
//! for Euclidean distances, which feed heuristic weights and never decide
//! validity.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::Error;

/// Largest absolute coordinate accepted anywhere in the crate.
pub const COORD_BOUND: i64 = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: i64,
    pub y: i64,
    /// Index of the point in its instance.
    pub id: u32,
}

impl Point {
    pub const fn new(id: u32, x: i64, y: i64) -> Self {
        Point { x, y, id }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }
}

/// Twice the signed area of triangle `abc`, positive when counterclockwise.
///
/// Both products are below 2^62 in magnitude and the true result is bounded
/// by twice the area of the coordinate box, so wrapping arithmetic yields the
/// exact value even when the intermediate subtraction overflows.
#[inline]
pub fn signed_area2(a: Point, b: Point, c: Point) -> i64 {
    let (abx, aby) = (b.x - a.x, b.y - a.y);
    let (acx, acy) = (c.x - a.x, c.y - a.y);
    abx.wrapping_mul(acy).wrapping_sub(aby.wrapping_mul(acx))
}

/// Shoelace term `a.x * b.y - a.y * b.x` for absolute coordinates.
#[inline]
pub fn cross(a: Point, b: Point) -> i128 {
    a.x as i128 * b.y as i128 - a.y as i128 * b.x as i128
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    let dx = (a.x - b.x) as f64;
    let dy = (a.y - b.y) as f64;
    libm::sqrt(dx * dx + dy * dy)
}

#[inline]
fn opposite(d1: i64, d2: i64) -> bool {
    (d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)
}

/// `p` lies in the closed bounding box of `s`. Only meaningful when `p` is
/// already known to be collinear with `s`.
#[inline]
fn in_box(s: Segment, p: Point) -> bool {
    s.a.x.min(s.b.x) <= p.x && p.x <= s.a.x.max(s.b.x) && s.a.y.min(s.b.y) <= p.y && p.y <= s.a.y.max(s.b.y)
}

/// True iff the segments share a point other than a common endpoint (same
/// point id). Proper crossings, an endpoint touching the other segment's
/// interior, and collinear overlaps of positive length all count.
pub fn segments_properly_interact(s: Segment, t: Segment) -> bool {
    let aa = s.a.id == t.a.id;
    let ab = s.a.id == t.b.id;
    let ba = s.b.id == t.a.id;
    let bb = s.b.id == t.b.id;
    if (aa && bb) || (ab && ba) {
        return true;
    }
    if aa || ab || ba || bb {
        let (pivot, u, v) = match (aa, ab, ba) {
            (true, _, _) => (s.a, s.b, t.b),
            (_, true, _) => (s.a, s.b, t.a),
            (_, _, true) => (s.b, s.a, t.b),
            _ => (s.b, s.a, t.a),
        };
        // Two segments leaving the same vertex overlap iff they point the same way.
        if signed_area2(pivot, u, v) != 0 {
            return false;
        }
        let dot = (u.x - pivot.x) as i128 * (v.x - pivot.x) as i128 + (u.y - pivot.y) as i128 * (v.y - pivot.y) as i128;
        return dot > 0;
    }

    let d1 = signed_area2(t.a, t.b, s.a);
    let d2 = signed_area2(t.a, t.b, s.b);
    let d3 = signed_area2(s.a, s.b, t.a);
    let d4 = signed_area2(s.a, s.b, t.b);
    if opposite(d1, d2) && opposite(d3, d4) {
        return true;
    }
    (d1 == 0 && in_box(t, s.a))
        || (d2 == 0 && in_box(t, s.b))
        || (d3 == 0 && in_box(s, t.a))
        || (d4 == 0 && in_box(s, t.b))
}

/// Strict convex hull (collinear boundary points excluded), counterclockwise,
/// starting at the lexicographically smallest point. Returns indices into
/// `points`.
pub fn convex_hull(points: &[Point]) -> Result<Vec<usize>, Error> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_unstable_by(|&i, &j| {
        let (p, q) = (points[i], points[j]);
        p.x.cmp(&q.x).then(p.y.cmp(&q.y)).then(p.id.cmp(&q.id))
    });

    let mut hull: Vec<usize> = Vec::with_capacity(order.len() + 1);
    for &i in &order {
        while hull.len() >= 2
            && signed_area2(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i]) <= 0
        {
            hull.pop();
        }
        hull.push(i);
    }
    let lower = hull.len() + 1;
    for &i in order.iter().rev().skip(1) {
        while hull.len() >= lower
            && signed_area2(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i]) <= 0
        {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    if hull.len() < 3 {
        return Err(Error::Degenerate);
    }
    Ok(hull)
}

/// Orders points lexicographically by coordinates; used to sort candidate lists.
pub fn lex_cmp(p: &Point, q: &Point) -> Ordering {
    p.x.cmp(&q.x).then(p.y.cmp(&q.y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(id: u32, x: i64, y: i64) -> Point {
        Point::new(id, x, y)
    }

    #[test]
    fn signed_area_examples() {
        assert_eq!(signed_area2(p(0, 0, 0), p(1, 4, 0), p(2, 0, 3)), 12);
        assert_eq!(signed_area2(p(0, 0, 0), p(2, 0, 3), p(1, 4, 0)), -12);
        assert_eq!(signed_area2(p(0, 0, 0), p(1, 2, 2), p(2, 5, 5)), 0);
    }

    #[test]
    fn signed_area_extreme_coordinates() {
        let b = COORD_BOUND;
        let a = p(0, -b, -b);
        let c = p(1, b, -b);
        let d = p(2, -b, b);
        let e = p(3, b, b);
        assert_eq!(signed_area2(a, c, d), 1i64 << 62);
        assert_eq!(signed_area2(c, e, d), 1i64 << 62);
        assert_eq!(signed_area2(d, c, a), -(1i64 << 62));
    }

    #[test]
    fn interaction_examples() {
        let s = Segment::new(p(0, 0, 0), p(1, 2, 2));
        let t = Segment::new(p(2, 0, 2), p(3, 2, 0));
        assert!(segments_properly_interact(s, t));

        let s = Segment::new(p(0, 0, 0), p(1, 1, 0));
        let t = Segment::new(p(2, 5, 5), p(3, 6, 6));
        assert!(!segments_properly_interact(s, t));

        let s = Segment::new(p(0, 0, 0), p(1, 2, 0));
        let t = Segment::new(p(1, 2, 0), p(2, 3, 1));
        assert!(!segments_properly_interact(s, t));

        let s = Segment::new(p(0, 0, 0), p(1, 4, 0));
        let t = Segment::new(p(2, 1, 0), p(3, 2, 0));
        assert!(segments_properly_interact(s, t));
    }

    #[test]
    fn interaction_touch_and_shared_endpoint_overlap() {
        // endpoint resting on the interior of the other segment
        let s = Segment::new(p(0, 0, 0), p(1, 4, 0));
        let t = Segment::new(p(2, 2, 0), p(3, 2, 5));
        assert!(segments_properly_interact(s, t));
        // shared endpoint, collinear, same direction
        let s = Segment::new(p(0, 0, 0), p(1, 4, 0));
        let t = Segment::new(p(0, 0, 0), p(2, 2, 0));
        assert!(segments_properly_interact(s, t));
        // shared endpoint, collinear, opposite directions
        let s = Segment::new(p(0, 0, 0), p(1, 4, 0));
        let t = Segment::new(p(0, 0, 0), p(2, -2, 0));
        assert!(!segments_properly_interact(s, t));
        // identical edge
        assert!(segments_properly_interact(s, Segment::new(s.b, s.a)));
        // collinear but disjoint
        let s = Segment::new(p(0, 0, 0), p(1, 1, 0));
        let t = Segment::new(p(2, 3, 0), p(3, 5, 0));
        assert!(!segments_properly_interact(s, t));
    }

    #[test]
    fn hull_examples() {
        let pts = [p(0, 0, 0), p(1, 10, 0), p(2, 10, 10), p(3, 0, 10), p(4, 5, 5)];
        assert_eq!(convex_hull(&pts).unwrap(), [0, 1, 2, 3]);

        let pts = [p(0, 0, 0), p(1, 5, 0), p(2, 10, 0), p(3, 10, 10), p(4, 0, 10)];
        assert_eq!(convex_hull(&pts).unwrap(), [0, 2, 3, 4]);

        let pts = [p(0, 3, 7), p(1, 0, 0), p(2, 5, 1)];
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h, [1, 2, 0]);
        assert!(signed_area2(pts[h[0]], pts[h[1]], pts[h[2]]) > 0);
    }

    #[test]
    fn hull_rejects_degenerate() {
        let pts = [p(0, 0, 0), p(1, 1, 1), p(2, 2, 2), p(3, 5, 5)];
        assert_eq!(convex_hull(&pts), Err(Error::Degenerate));
        assert_eq!(convex_hull(&pts[..2]), Err(Error::TooFewPoints(2)));
    }

    #[test]
    fn dist_examples() {
        assert_eq!(dist(p(0, 0, 0), p(1, 3, 4)), 5.0);
        assert_eq!(dist(p(0, 0, 0), p(1, 0, 0)), 0.0);
        assert!((dist(p(0, 0, 0), p(1, 1, 1)) - core::f64::consts::SQRT_2).abs() < 1e-12);
    }

    fn coord() -> impl Strategy<Value = i64> {
        prop_oneof![-COORD_BOUND..=COORD_BOUND, -4i64..=4]
    }

    fn point(id: u32) -> impl Strategy<Value = Point> {
        (coord(), coord()).prop_map(move |(x, y)| Point::new(id, x, y))
    }

    proptest! {
        #[test]
        fn signed_area_matches_wide_determinant(a in point(0), b in point(1), c in point(2)) {
            let wide = (b.x as i128 - a.x as i128) * (c.y as i128 - a.y as i128)
                - (b.y as i128 - a.y as i128) * (c.x as i128 - a.x as i128);
            prop_assert_eq!(signed_area2(a, b, c) as i128, wide);
            prop_assert_eq!(signed_area2(a, b, c), -signed_area2(b, a, c));
            prop_assert_eq!(signed_area2(a, b, c), -signed_area2(a, c, b));
            prop_assert_eq!(signed_area2(a, b, c), -signed_area2(c, b, a));
        }

        #[test]
        fn interaction_is_symmetric(a in point(0), b in point(1), c in point(2), d in point(3)) {
            let s = Segment::new(a, b);
            let t = Segment::new(c, d);
            prop_assert_eq!(segments_properly_interact(s, t), segments_properly_interact(t, s));
            prop_assert_eq!(
                segments_properly_interact(s, t),
                segments_properly_interact(Segment::new(b, a), Segment::new(d, c))
            );
        }

        #[test]
        fn hull_is_convex_and_contains_everything(
            raw in proptest::collection::vec((-50i64..50, -50i64..50), 3..40)
        ) {
            let pts: Vec<Point> = raw.iter().enumerate()
                .map(|(i, &(x, y))| Point::new(i as u32, x, y)).collect();
            let Ok(hull) = convex_hull(&pts) else { return Ok(()); };
            let m = hull.len();
            for i in 0..m {
                let (a, b, c) = (pts[hull[i]], pts[hull[(i + 1) % m]], pts[hull[(i + 2) % m]]);
                prop_assert!(signed_area2(a, b, c) > 0);
            }
            for q in &pts {
                for i in 0..m {
                    prop_assert!(signed_area2(pts[hull[i]], pts[hull[(i + 1) % m]], *q) >= 0);
                }
            }
            let mut rev = pts.clone();
            rev.reverse();
            let mut a: Vec<u32> = hull.iter().map(|&i| pts[i].id).collect();
            let mut b: Vec<u32> = convex_hull(&rev).unwrap().iter().map(|&i| rev[i].id).collect();
            a.sort_unstable();
            b.sort_unstable();
            prop_assert_eq!(a, b);
        }
    }
}
