//! Exact integer planar geometry.
//!
//! Coordinates are bounded by 10^9 in absolute value, so every determinant
//! below is evaluated exactly in `i128`. Nothing in this module touches
//! floating point.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest admissible absolute coordinate value.
pub const COORD_LIMIT: i64 = 1_000_000_000;

/// Point sets up to this size are checked exhaustively for collinear triples
/// when loaded. Larger sets are checked lazily by the predicates that care.
pub const EAGER_VALIDATION_LIMIT: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point { x, y }
    }
}

/// Twice the signed area of triangle `abc`.
#[inline]
pub fn cross(a: Point, b: Point, c: Point) -> i128 {
    let (bx, by) = ((b.x - a.x) as i128, (b.y - a.y) as i128);
    let (cx, cy) = ((c.x - a.x) as i128, (c.y - a.y) as i128);
    bx * cy - by * cx
}

/// Sign of `(b - a) x (c - a)`: +1 for a left turn, -1 for a right turn,
/// 0 when the three points are collinear.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> i32 {
    cross(a, b, c).signum() as i32
}

/// True iff `p` lies in the open triangle `abc`.
pub fn in_triangle_interior(p: Point, a: Point, b: Point, c: Point) -> bool {
    let s = orient(a, b, c);
    if s == 0 {
        return false;
    }
    orient(a, b, p) == s && orient(b, c, p) == s && orient(c, a, p) == s
}

/// True iff the open segments `ab` and `cd` cross at a single interior point.
pub fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 * o2 < 0 && o3 * o4 < 0
}

/// True iff the closed segments `ab` and `cd` share any point other than a
/// common endpoint. Handles collinear overlaps, which only arise for inputs
/// that are not in general position.
fn segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool {
    if segments_cross(a, b, c, d) {
        return true;
    }
    let on = |p: Point, q: Point, r: Point| {
        orient(p, q, r) == 0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    let shared = |p: Point| p == a || p == b;
    (on(a, b, c) && !shared(c)) || (on(a, b, d) && !shared(d)) || (on(c, d, a) && a != c && a != d)
        || (on(c, d, b) && b != c && b != d)
}

/// An immutable, validated set of points in general position. All other
/// structures refer to points by their index in this set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    /// Validates bounds, distinctness and, for sets of up to
    /// [`EAGER_VALIDATION_LIMIT`] points, the absence of collinear triples.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooFewPoints(points.len()));
        }
        for (index, p) in points.iter().enumerate() {
            if p.x.abs() > COORD_LIMIT || p.y.abs() > COORD_LIMIT {
                return Err(Error::CoordinateOutOfRange { index });
            }
        }
        let mut sorted: Vec<usize> = (0..points.len()).collect();
        sorted.sort_by_key(|&i| (points[i], i));
        for w in sorted.windows(2) {
            if points[w[0]] == points[w[1]] {
                return Err(Error::DuplicatePoint(w[0], w[1]));
            }
        }
        if points.len() <= EAGER_VALIDATION_LIMIT {
            if let Some((i, j, k)) = find_collinear_triple(&points) {
                return Err(Error::Collinear(i, j, k));
            }
        }
        Ok(PointSet { points })
    }

    /// Sub-set of an already validated set; general position is inherited.
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet { points: indices.iter().map(|&i| self.points[i]).collect() }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    #[inline]
    pub fn orient(&self, a: usize, b: usize, c: usize) -> i32 {
        orient(self.points[a], self.points[b], self.points[c])
    }

    /// Exact point-in-open-triangle test on indices.
    #[inline]
    pub fn in_triangle(&self, p: usize, a: usize, b: usize, c: usize) -> bool {
        in_triangle_interior(self.points[p], self.points[a], self.points[b], self.points[c])
    }
}

/// Finds a collinear triple by sorting, for every point, the primitive
/// directions towards all later points. O(n^2 log n).
fn find_collinear_triple(points: &[Point]) -> Option<(usize, usize, usize)> {
    let n = points.len();
    let mut dirs: HashMap<(i64, i64), usize> = HashMap::with_capacity(n);
    for i in 0..n {
        dirs.clear();
        for j in 0..n {
            if j == i {
                continue;
            }
            let (mut dx, mut dy) = (points[j].x - points[i].x, points[j].y - points[i].y);
            let g = gcd(dx.unsigned_abs(), dy.unsigned_abs()) as i64;
            dx /= g;
            dy /= g;
            if dy < 0 || (dy == 0 && dx < 0) {
                dx = -dx;
                dy = -dy;
            }
            if let Some(&prev) = dirs.get(&(dx, dy)) {
                let mut t = [i, prev, j];
                t.sort_unstable();
                return Some((t[0], t[1], t[2]));
            }
            dirs.insert((dx, dy), j);
        }
    }
    None
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A polygon stored as a counterclockwise cycle of point indices, rotated so
/// that the smallest index comes first. Two polygons over the same point set
/// are equal iff their cells coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polygon(Vec<usize>);

impl Polygon {
    /// Wraps a cycle already known to be counterclockwise.
    pub fn from_ccw(mut vertices: Vec<usize>) -> Self {
        if let Some(pos) = vertices.iter().enumerate().min_by_key(|(_, v)| **v).map(|(i, _)| i) {
            vertices.rotate_left(pos);
        }
        Polygon(vertices)
    }

    /// Validating constructor: reorients clockwise input, and rejects
    /// repeated vertices, zero area and self-intersections.
    pub fn new(mut vertices: Vec<usize>, ps: &PointSet) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegeneratePolygon(format!("{} vertices", vertices.len())));
        }
        if let Some(&bad) = vertices.iter().find(|&&v| v >= ps.len()) {
            return Err(Error::IndexOutOfRange(bad));
        }
        let a = signed_area2(&vertices, ps);
        if a == 0 {
            return Err(Error::DegeneratePolygon("zero area".into()));
        }
        if a < 0 {
            vertices.reverse();
        }
        if !cycle_is_simple(&vertices, ps) {
            return Err(Error::DegeneratePolygon("not simple".into()));
        }
        Ok(Polygon::from_ccw(vertices))
    }

    /// Triangle on three indices, oriented counterclockwise.
    pub fn triangle(a: usize, b: usize, c: usize, ps: &PointSet) -> Self {
        if ps.orient(a, b, c) >= 0 {
            Polygon::from_ccw(vec![a, b, c])
        } else {
            Polygon::from_ccw(vec![a, c, b])
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Directed edges `(v_i, v_{i+1})` in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges().any(|e| e == (u, v))
    }

    /// Bounding box as `(min, max)` corners.
    pub fn bbox(&self, ps: &PointSet) -> (Point, Point) {
        let mut lo = ps.point(self.0[0]);
        let mut hi = lo;
        for &v in &self.0[1..] {
            let p = ps.point(v);
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

fn signed_area2(vertices: &[usize], ps: &PointSet) -> i128 {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let p = ps.point(vertices[i]);
            let q = ps.point(vertices[(i + 1) % n]);
            p.x as i128 * q.y as i128 - q.x as i128 * p.y as i128
        })
        .sum()
}

/// Twice the signed area (shoelace); positive for counterclockwise cycles.
pub fn area2(poly: &Polygon, ps: &PointSet) -> i128 {
    signed_area2(poly.vertices(), ps)
}

/// Simple-cycle test: distinct vertices and no two non-adjacent edges touch.
pub fn cycle_is_simple(vertices: &[usize], ps: &PointSet) -> bool {
    let n = vertices.len();
    let mut seen = vertices.to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    for i in 0..n {
        let (a, b) = (ps.point(vertices[i]), ps.point(vertices[(i + 1) % n]));
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                // adjacent edges: only a fold-back can make them touch
                let (c, d) = (ps.point(vertices[j]), ps.point(vertices[(j + 1) % n]));
                let (p, q, r) = if j == i + 1 { (a, b, d) } else { (c, d, b) };
                if orient(p, q, r) == 0 && n > 3 {
                    let dot = (q.x - p.x) as i128 * (r.x - q.x) as i128
                        + (q.y - p.y) as i128 * (r.y - q.y) as i128;
                    if dot < 0 {
                        return false;
                    }
                }
                continue;
            }
            let (c, d) = (ps.point(vertices[j]), ps.point(vertices[(j + 1) % n]));
            if segments_touch(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// True iff every consecutive vertex triple turns strictly left and the cycle
/// winds exactly once (a single lexicographic local minimum).
pub fn is_convex(poly: &Polygon, ps: &PointSet) -> bool {
    is_convex_cycle(poly.vertices(), ps)
}

pub fn is_convex_cycle(v: &[usize], ps: &PointSet) -> bool {
    let n = v.len();
    if n < 3 {
        return false;
    }
    let mut minima = 0;
    for i in 0..n {
        let a = ps.point(v[(i + n - 1) % n]);
        let b = ps.point(v[i]);
        let c = ps.point(v[(i + 1) % n]);
        if orient(a, b, c) <= 0 {
            return false;
        }
        let key = |p: Point| (p.y, p.x);
        if key(b) < key(a) && key(b) < key(c) {
            minima += 1;
        }
    }
    minima == 1
}

/// Counterclockwise convex hull by Andrew's monotone chain. Fails with the
/// offending triple if three hull candidates are collinear.
pub fn convex_hull(ps: &PointSet) -> Result<Polygon> {
    let mut idx: Vec<usize> = (0..ps.len()).collect();
    idx.sort_by_key(|&i| (ps.point(i), i));
    let mut chain: Vec<usize> = Vec::with_capacity(2 * idx.len());
    let build = |chain: &mut Vec<usize>, it: &mut dyn Iterator<Item = usize>| -> Result<()> {
        let base = chain.len();
        for i in it {
            while chain.len() >= base + 2 {
                let (a, b) = (chain[chain.len() - 2], chain[chain.len() - 1]);
                match ps.orient(a, b, i) {
                    1 => break,
                    0 => {
                        let mut t = [a, b, i];
                        t.sort_unstable();
                        return Err(Error::Collinear(t[0], t[1], t[2]));
                    }
                    _ => {
                        chain.pop();
                    }
                }
            }
            chain.push(i);
        }
        Ok(())
    };
    build(&mut chain, &mut idx.iter().copied())?;
    let lower_len = chain.len();
    let mut upper = Vec::with_capacity(idx.len());
    build(&mut upper, &mut idx.iter().rev().copied())?;
    chain.pop();
    upper.pop();
    chain.extend(upper);
    debug_assert!(lower_len >= 2);
    Ok(Polygon::from_ccw(chain))
}

/// Point-in-polygon test for the rational point `(px / scale, py / scale)`.
/// Returns true only for points strictly inside; boundary points are outside.
pub fn contains_scaled(poly: &Polygon, ps: &PointSet, px: i128, py: i128, scale: i128) -> bool {
    let v = poly.vertices();
    let n = v.len();
    let mut inside = false;
    for i in 0..n {
        let a = ps.point(v[i]);
        let b = ps.point(v[(i + 1) % n]);
        let (ax, ay) = (a.x as i128 * scale, a.y as i128 * scale);
        let (bx, by) = (b.x as i128 * scale, b.y as i128 * scale);
        let cr = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
        if cr == 0
            && px >= ax.min(bx)
            && px <= ax.max(bx)
            && py >= ay.min(by)
            && py <= ay.max(by)
        {
            return false;
        }
        if (ay > py) != (by > py) {
            // crossing of the horizontal ray towards +x
            let above = if by > ay { cr > 0 } else { cr < 0 };
            if above {
                inside = !inside;
            }
        }
    }
    inside
}

/// True iff point `p` lies strictly inside the simple polygon.
pub fn contains_strict(poly: &Polygon, ps: &PointSet, p: Point) -> bool {
    contains_scaled(poly, ps, p.x as i128, p.y as i128, 1)
}

/// Edge-join of two counterclockwise polygons sharing exactly one edge: the
/// polygon bounded by the symmetric difference of their boundaries.
pub fn edge_join(a: &Polygon, b: &Polygon, ps: &PointSet) -> Result<Polygon> {
    let shared: Vec<(usize, usize)> = a.edges().filter(|&(u, v)| b.has_edge(v, u)).collect();
    match shared.len() {
        0 => return Err(Error::NoSharedEdge),
        1 => {}
        k => return Err(Error::MultipleSharedEdges(k)),
    }
    let (u, v) = shared[0];
    let joined = stitch(a, b, u, v);
    if !cycle_is_simple(&joined, ps) {
        return Err(Error::OverlappingInteriors);
    }
    Ok(Polygon::from_ccw(joined))
}

/// Stitches `a` (containing edge u->v) and `b` (containing v->u) into one
/// cycle without validation.
pub(crate) fn stitch(a: &Polygon, b: &Polygon, u: usize, v: usize) -> Vec<usize> {
    let av = a.vertices();
    let bv = b.vertices();
    let ia = av.iter().position(|&x| x == v).expect("edge endpoint in a");
    let ib = bv.iter().position(|&x| x == u).expect("edge endpoint in b");
    let mut out = Vec::with_capacity(av.len() + bv.len() - 2);
    // a from v around to u
    for k in 0..av.len() {
        out.push(av[(ia + k) % av.len()]);
    }
    // b from u around to v, skipping both endpoints
    for k in 1..bv.len() - 1 {
        out.push(bv[(ib + k) % bv.len()]);
    }
    out
}

/// The single shared edge `(u, v)` of `a` (as directed in `a`), if the two
/// polygons share exactly one.
pub fn shared_edge(a: &Polygon, b: &Polygon) -> Option<(usize, usize)> {
    let mut it = a.edges().filter(|&(u, v)| b.has_edge(v, u));
    let first = it.next()?;
    if it.next().is_some() {
        None
    } else {
        Some(first)
    }
}

/// Convexity of the union of two convex polygons sharing edge `u -> v` of
/// `a`; returns the joined polygon when it is convex.
pub fn convex_join(a: &Polygon, b: &Polygon, ps: &PointSet) -> Option<Polygon> {
    let (u, v) = shared_edge(a, b)?;
    let joined = stitch(a, b, u, v);
    if is_convex_cycle(&joined, ps) {
        Some(Polygon::from_ccw(joined))
    } else {
        None
    }
}
