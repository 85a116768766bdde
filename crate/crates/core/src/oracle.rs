//! Exhaustive ground truth for tiny point sets.
//!
//! The search covers the hull region cell by cell. The state is the set of
//! open directed edges: an edge `(u, v)` is open while the region on its
//! left is still uncovered. Initially the open edges are the hull edges.
//! The smallest open edge is closed by every empty convex polygon that has
//! it as a counterclockwise edge and fits into the uncovered region. Every
//! convex decomposition is reached along exactly one path, so summing over
//! choices counts decompositions and minimizing finds the optimum. Results
//! are memoized on the open-edge set.

use std::collections::HashMap;

use crate::decomposition::{Decomposition, Source};
use crate::error::{Error, Result};
use crate::geom::{contains_scaled, convex_hull, is_convex_cycle, segments_cross, PointSet, Polygon};

pub const TRIANGULATION_CAP: usize = 12;
pub const EXHAUSTIVE_CAP: usize = 9;
/// Cap for the triangulation-and-edge-subset cross-check.
pub const SUBSET_CAP: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub min_cells: usize,
    /// One optimal decomposition.
    pub witness: Decomposition,
    /// Distinct open-edge states expanded.
    pub states: usize,
    /// Empty convex polygons available to the search.
    pub candidates: usize,
}

type Edge = (u8, u8);
/// Best count per open-edge state, with the chosen polygon and the state it leads to.
type Memo = HashMap<Vec<Edge>, (usize, Option<(usize, Vec<Edge>)>)>;

/// Every empty convex polygon on at least three points of the set.
pub fn empty_convex_polygons(ps: &PointSet) -> Vec<Polygon> {
    let n = ps.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() < 3 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub = ps.subset(&idx);
        let Ok(h) = convex_hull(&sub) else { continue };
        if h.len() != idx.len() {
            continue;
        }
        let poly = Polygon::from_ccw(h.vertices().iter().map(|&i| idx[i]).collect());
        let empty = (0..n)
            .filter(|i| mask & (1 << i) == 0)
            .all(|q| !contains_scaled(&poly, ps, ps.point(q).x as i128, ps.point(q).y as i128, 1));
        if empty {
            out.push(poly);
        }
    }
    out
}

fn empty_triangles(ps: &PointSet) -> Vec<Polygon> {
    let n = ps.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if (0..n).all(|q| q == a || q == b || q == c || !ps.in_triangle(q, a, b, c)) {
                    out.push(Polygon::triangle(a, b, c, ps));
                }
            }
        }
    }
    out
}

struct Search<'a> {
    ps: &'a PointSet,
    cells: Vec<Polygon>,
    by_edge: HashMap<Edge, Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(ps: &'a PointSet, cells: Vec<Polygon>) -> Self {
        let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
        for (i, c) in cells.iter().enumerate() {
            for (u, v) in c.edges() {
                by_edge.entry((u as u8, v as u8)).or_default().push(i);
            }
        }
        Search { ps, cells, by_edge }
    }

    fn initial(&self) -> Result<Vec<Edge>> {
        let hull = convex_hull(self.ps)?;
        let mut open: Vec<Edge> = hull.edges().map(|(u, v)| (u as u8, v as u8)).collect();
        open.sort_unstable();
        Ok(open)
    }

    /// Open-edge set after placing cell `ci` on the smallest open edge, or
    /// `None` if the cell does not fit into the uncovered region.
    fn place(&self, open: &[Edge], ci: usize) -> Option<Vec<Edge>> {
        let cell = &self.cells[ci];
        let ps = self.ps;
        for (a, b) in cell.edges() {
            if open.binary_search(&(b as u8, a as u8)).is_ok() {
                return None;
            }
        }
        for &(u, v) in open {
            let (u, v) = (u as usize, v as usize);
            if cell.has_edge(u, v) {
                continue;
            }
            let (pu, pv) = (ps.point(u), ps.point(v));
            let crosses = cell.edges().any(|(a, b)| segments_cross(pu, pv, ps.point(a), ps.point(b)));
            let mid_inside =
                contains_scaled(cell, ps, pu.x as i128 + pv.x as i128, pu.y as i128 + pv.y as i128, 2);
            if crosses || mid_inside {
                return None;
            }
        }
        let mut next: Vec<Edge> = open.to_vec();
        for (a, b) in cell.edges() {
            let e = (a as u8, b as u8);
            match next.binary_search(&e) {
                Ok(pos) => {
                    next.remove(pos);
                }
                Err(_) => {
                    let r = (b as u8, a as u8);
                    let pos = next.binary_search(&r).unwrap_err();
                    next.insert(pos, r);
                }
            }
        }
        Some(next)
    }

    fn moves(&self, open: &[Edge]) -> Vec<(usize, Vec<Edge>)> {
        let e = open[0];
        self.by_edge
            .get(&e)
            .map(|cs| cs.iter().filter_map(|&ci| self.place(open, ci).map(|nx| (ci, nx))).collect())
            .unwrap_or_default()
    }
}

/// Number of triangulations, by memoized counting over open-edge states.
pub fn count_triangulations(ps: &PointSet) -> Result<u64> {
    cap(ps, TRIANGULATION_CAP, "triangulation count")?;
    let s = Search::new(ps, empty_triangles(ps));
    let mut memo: HashMap<Vec<Edge>, u64> = HashMap::new();
    fn go(s: &Search, open: Vec<Edge>, memo: &mut HashMap<Vec<Edge>, u64>) -> u64 {
        if open.is_empty() {
            return 1;
        }
        if let Some(&v) = memo.get(&open) {
            return v;
        }
        let total = s.moves(&open).into_iter().map(|(_, nx)| go(s, nx, memo)).sum();
        memo.insert(open, total);
        total
    }
    let open = s.initial()?;
    Ok(go(&s, open, &mut memo))
}

/// Every triangulation, each as a list of triangles in placement order.
pub fn enumerate_triangulations(ps: &PointSet) -> Result<Vec<Vec<Polygon>>> {
    cap(ps, TRIANGULATION_CAP, "triangulation enumeration")?;
    let s = Search::new(ps, empty_triangles(ps));
    let mut out = Vec::new();
    fn go(s: &Search, open: Vec<Edge>, path: &mut Vec<usize>, out: &mut Vec<Vec<Polygon>>) {
        if open.is_empty() {
            out.push(path.iter().map(|&i| s.cells[i].clone()).collect());
            return;
        }
        for (ci, nx) in s.moves(&open) {
            path.push(ci);
            go(s, nx, path, out);
            path.pop();
        }
    }
    go(&s, s.initial()?, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Minimum number of cells over all convex decompositions.
pub fn min_convex_decomposition(ps: &PointSet) -> Result<OracleResult> {
    cap(ps, EXHAUSTIVE_CAP, "exhaustive oracle")?;
    let s = Search::new(ps, empty_convex_polygons(ps));
    let mut memo: Memo = HashMap::new();
    fn go(s: &Search, open: &[Edge], memo: &mut Memo) -> usize {
        if open.is_empty() {
            return 0;
        }
        if let Some((v, _)) = memo.get(open) {
            return *v;
        }
        let mut best = (usize::MAX, None);
        for (ci, nx) in s.moves(open) {
            let sub = go(s, &nx, memo);
            if sub != usize::MAX && sub + 1 < best.0 {
                best = (sub + 1, Some((ci, nx)));
            }
        }
        let v = best.0;
        memo.insert(open.to_vec(), best);
        v
    }
    let start = s.initial()?;
    let min_cells = go(&s, &start, &mut memo);
    let mut cells = Vec::new();
    let mut cur = start;
    while !cur.is_empty() {
        let (_, Some((ci, nx))) = memo[&cur].clone() else { break };
        cells.push(s.cells[ci].clone());
        cur = nx;
    }
    Ok(OracleResult {
        min_cells,
        witness: Decomposition::new(cells, Source::Oracle),
        states: memo.len(),
        candidates: s.cells.len(),
    })
}

/// Minimum over all triangulations and all subsets of their interior edges
/// whose removal leaves convex faces. Much slower; used to cross-check the
/// open-edge search on very small sets.
pub fn min_by_triangulation_subsets(ps: &PointSet) -> Result<usize> {
    cap(ps, SUBSET_CAP, "subset oracle")?;
    let mut best = usize::MAX;
    for tri in enumerate_triangulations(ps)? {
        let mut interior: Vec<(usize, usize, usize, usize)> = Vec::new();
        for (i, a) in tri.iter().enumerate() {
            for (j, b) in tri.iter().enumerate().skip(i + 1) {
                if let Some((u, v)) = a.edges().find(|&(u, v)| b.has_edge(v, u)) {
                    interior.push((i, j, u, v));
                }
            }
        }
        let m = interior.len();
        for mask in 0u32..(1 << m) {
            let mut parent: Vec<usize> = (0..tri.len()).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            for (bit, &(i, j, _, _)) in interior.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
            let roots: Vec<usize> = (0..tri.len()).map(|i| find(&mut parent, i)).collect();
            let mut faces: HashMap<usize, Vec<usize>> = HashMap::new();
            for (i, &r) in roots.iter().enumerate() {
                faces.entry(r).or_default().push(i);
            }
            if faces.len() >= best {
                continue;
            }
            let ok = faces.values().all(|members| {
                members.len() == 1 || face_is_convex(members.iter().map(|&i| &tri[i]), ps)
            });
            if ok {
                best = faces.len();
            }
        }
    }
    Ok(best)
}

/// Boundary of a union of triangles (edges without their reverse), walked
/// as a single cycle and tested for convexity. A triangle vertex missing
/// from the boundary would be a point inside the face.
fn face_is_convex<'a>(tris: impl Iterator<Item = &'a Polygon>, ps: &PointSet) -> bool {
    let edges: Vec<(usize, usize)> = tris.flat_map(|t| t.edges().collect::<Vec<_>>()).collect();
    let mut vertices: Vec<usize> = edges.iter().map(|e| e.0).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let boundary: Vec<(usize, usize)> =
        edges.iter().copied().filter(|&(u, v)| !edges.contains(&(v, u))).collect();
    let next: HashMap<usize, usize> = boundary.iter().copied().collect();
    if next.len() != boundary.len() {
        return false;
    }
    let start = boundary[0].0;
    let mut cycle = vec![start];
    let mut cur = next[&start];
    while cur != start {
        if cycle.len() > boundary.len() {
            return false;
        }
        cycle.push(cur);
        cur = match next.get(&cur) {
            Some(&x) => x,
            None => return false,
        };
    }
    cycle.len() == boundary.len() && cycle.len() == vertices.len() && is_convex_cycle(&cycle, ps)
}

fn cap(ps: &PointSet, cap: usize, what: &'static str) -> Result<()> {
    if ps.len() > cap {
        return Err(Error::CapExceeded { what, n: ps.len(), cap });
    }
    Ok(())
}

/// Outcome of comparing an optimum against `floor(10n/7) - c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub min_cells: usize,
    pub bound: i64,
    pub holds: bool,
}

pub fn theorem_bound_check(result: &OracleResult, ps: &PointSet) -> Result<BoundCheck> {
    let c = convex_hull(ps)?.len() as i64;
    let bound = 10 * ps.len() as i64 / 7 - c;
    Ok(BoundCheck { min_cells: result.min_cells, bound, holds: result.min_cells as i64 <= bound })
}
