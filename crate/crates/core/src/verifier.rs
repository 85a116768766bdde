//! Exact certification of a decomposition.
//!
//! A convex decomposition of a point set is a set of convex polygons with
//! vertices in the set such that
//!
//! * C1: no point lies strictly inside any cell,
//! * C2: the interiors of any two cells are disjoint,
//! * C3: the cells cover the convex hull.
//!
//! It is *minimal* when the union of any two cells is not convex. Only cells
//! sharing an edge need checking: two interior-disjoint convex cells that do
//! not share an edge meet in at most a vertex (or along part of an edge,
//! which general position rules out), and such a union is not a convex
//! polygon.
//!
//! The verifier is construction-agnostic; it reads nothing but the cells.

use std::collections::HashMap;
use std::fmt;

use crate::decomposition::{Decomposition, Discrepancy};
use crate::geom::{area2, contains_scaled, contains_strict, convex_hull, convex_join, cycle_is_simple, is_convex, segments_cross, Point, PointSet, Polygon};
use crate::radial::RadialStructure;

/// Concrete evidence for a failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Cell index and the reason it is malformed.
    BadCell { cell: usize, reason: String },
    /// A point strictly inside a cell.
    PointInCell { point: usize, cell: usize },
    /// Two cells whose interiors intersect.
    Overlap { a: usize, b: usize },
    /// Total cell area differs from the hull area (both doubled).
    Area { cells: i128, hull: i128 },
    /// Two adjacent cells whose union is convex.
    Mergeable { a: usize, b: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::BadCell { cell, reason } => write!(f, "cell={cell} {reason}"),
            Witness::PointInCell { point, cell } => write!(f, "point={point} cell={cell}"),
            Witness::Overlap { a, b } => write!(f, "cells={a},{b}"),
            Witness::Area { cells, hull } => write!(f, "area2_cells={cells} area2_hull={hull}"),
            Witness::Mergeable { a, b } => write!(f, "cells={a},{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub witnesses: Vec<Witness>,
}

impl Check {
    fn new(name: &'static str, witnesses: Vec<Witness>) -> Self {
        Check { name, witnesses }
    }

    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "CHECK {} PASS", self.name)
        } else {
            write!(f, "CHECK {} FAIL", self.name)?;
            for w in self.witnesses.iter().take(8) {
                write!(f, " {w};")?;
            }
            if self.witnesses.len() > 8 {
                write!(f, " (+{} more)", self.witnesses.len() - 8)?;
            }
            Ok(())
        }
    }
}

/// Cell count against the closed-form bounds. Targets can be negative for
/// tiny `n`, hence signed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCounts {
    pub cells: usize,
    pub n: usize,
    pub c: usize,
    pub k: usize,
    /// `floor(10n/7) - c`.
    pub theorem_target: i64,
    /// `n + k - c`.
    pub baseline_target: i64,
    /// `floor(3n/2) - c`.
    pub prior_target: i64,
}

impl BoundCounts {
    pub fn new(cells: usize, n: usize, c: usize, k: usize) -> Self {
        let (n_, c_) = (n as i64, c as i64);
        BoundCounts {
            cells,
            n,
            c,
            k,
            theorem_target: 10 * n_ / 7 - c_,
            baseline_target: n_ + k as i64 - c_,
            prior_target: 3 * n_ / 2 - c_,
        }
    }

    pub fn theorem_slack(&self) -> i64 {
        self.cells as i64 - self.theorem_target
    }

    pub fn baseline_slack(&self) -> i64 {
        self.cells as i64 - self.baseline_target
    }

    pub fn prior_slack(&self) -> i64 {
        self.cells as i64 - self.prior_target
    }
}

impl fmt::Display for BoundCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "COUNT cells={} n={} c={} k={} target_10n7={} slack_10n7={} target_nkc={} slack_nkc={} target_3n2={} slack_3n2={}",
            self.cells,
            self.n,
            self.c,
            self.k,
            self.theorem_target,
            self.theorem_slack(),
            self.baseline_target,
            self.baseline_slack(),
            self.prior_target,
            self.prior_slack()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub convex: Check,
    pub c1_empty: Check,
    pub c2_disjoint: Check,
    pub c3_cover: Check,
    pub minimal: Check,
    pub counts: BoundCounts,
    pub discrepancies: Vec<Discrepancy>,
}

impl VerificationReport {
    /// C1-C3 and convexity: the cells form a convex decomposition.
    pub fn is_decomposition(&self) -> bool {
        self.convex.passed() && self.c1_empty.passed() && self.c2_disjoint.passed() && self.c3_cover.passed()
    }

    /// A minimal convex decomposition.
    pub fn passed(&self) -> bool {
        self.is_decomposition() && self.minimal.passed()
    }

    pub fn checks(&self) -> [&Check; 5] {
        [&self.convex, &self.c1_empty, &self.c2_disjoint, &self.c3_cover, &self.minimal]
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.checks() {
            writeln!(f, "{c}")?;
        }
        writeln!(f, "{}", self.counts)?;
        for d in &self.discrepancies {
            writeln!(f, "DISCREPANCY {d}")?;
        }
        Ok(())
    }
}

/// Runs every check.
pub fn verify(decomp: &Decomposition, ps: &PointSet) -> VerificationReport {
    let structure = check_structure(decomp, ps);
    let well_formed = structure.iter().all(|w| !matches!(w, Witness::BadCell { reason, .. } if reason != "not convex"));
    let convex = structure;
    let c1 = if well_formed { check_emptiness(decomp, ps) } else { skipped("c1_empty") };
    let (c2, c3) = if well_formed { check_disjoint_and_cover(decomp, ps) } else { (skipped("c2_disjoint"), skipped("c3_cover")) };
    let all_convex = convex.is_empty();
    let minimal = if all_convex && well_formed { check_minimality(decomp, ps) } else { skipped("minimal") };
    let (c, k) = match (convex_hull(ps), RadialStructure::build(ps)) {
        (Ok(h), Ok(rs)) => (h.len(), rs.k),
        _ => (0, 0),
    };
    VerificationReport {
        convex: Check::new("convex", convex),
        c1_empty: c1,
        c2_disjoint: c2,
        c3_cover: c3,
        minimal,
        counts: BoundCounts::new(decomp.len(), ps.len(), c, k),
        discrepancies: decomp.accounting.discrepancies.clone(),
    }
}

fn skipped(name: &'static str) -> Check {
    Check::new(name, vec![Witness::BadCell { cell: usize::MAX, reason: "skipped: malformed cells".into() }])
}

/// Malformed or non-convex cells.
fn check_structure(decomp: &Decomposition, ps: &PointSet) -> Vec<Witness> {
    let mut out = Vec::new();
    for (i, cell) in decomp.cells.iter().enumerate() {
        let v = cell.vertices();
        let reason = if v.len() < 3 {
            Some("fewer than 3 vertices".to_string())
        } else if let Some(&bad) = v.iter().find(|&&x| x >= ps.len()) {
            Some(format!("index {bad} out of range"))
        } else if area2(cell, ps) <= 0 {
            Some("not counterclockwise".to_string())
        } else if !cycle_is_simple(v, ps) {
            Some("not simple".to_string())
        } else if !is_convex(cell, ps) {
            Some("not convex".to_string())
        } else {
            None
        };
        if let Some(reason) = reason {
            out.push(Witness::BadCell { cell: i, reason });
        }
    }
    out
}

type Bbox = (Point, Point);

fn bboxes(decomp: &Decomposition, ps: &PointSet) -> Vec<Bbox> {
    decomp.cells.iter().map(|c| c.bbox(ps)).collect()
}

fn in_bbox(b: &Bbox, p: Point) -> bool {
    p.x >= b.0.x && p.x <= b.1.x && p.y >= b.0.y && p.y <= b.1.y
}

/// C1: no point strictly inside any cell.
pub fn check_emptiness(decomp: &Decomposition, ps: &PointSet) -> Check {
    let boxes = bboxes(decomp, ps);
    let mut w = Vec::new();
    for (ci, cell) in decomp.cells.iter().enumerate() {
        for q in 0..ps.len() {
            let p = ps.point(q);
            if in_bbox(&boxes[ci], p) && !cell.has_vertex(q) && contains_strict(cell, ps, p) {
                w.push(Witness::PointInCell { point: q, cell: ci });
            }
        }
    }
    Check::new("c1_empty", w)
}

/// A point strictly inside the cell, as integer coordinates over `scale`:
/// the centroid of an ear.
fn interior_probe(cell: &Polygon, ps: &PointSet) -> (i128, i128, i128) {
    let v = cell.vertices();
    let m = v.len();
    for i in 0..m {
        let (a, b, c) = (v[(i + m - 1) % m], v[i], v[(i + 1) % m]);
        if ps.orient(a, b, c) > 0 && v.iter().all(|&q| q == a || q == b || q == c || !ps.in_triangle(q, a, b, c)) {
            let (pa, pb, pc) = (ps.point(a), ps.point(b), ps.point(c));
            return ((pa.x + pb.x + pc.x) as i128, (pa.y + pb.y + pc.y) as i128, 3);
        }
    }
    let p = ps.point(v[0]);
    (p.x as i128, p.y as i128, 1)
}

fn probe_inside(cell: &Polygon, ps: &PointSet, probe: (i128, i128, i128)) -> bool {
    contains_scaled(cell, ps, probe.0, probe.1, probe.2)
}

fn interiors_overlap(a: &Polygon, b: &Polygon, pa: (i128, i128, i128), pb: (i128, i128, i128), ps: &PointSet) -> bool {
    for (u, v) in a.edges() {
        for (x, y) in b.edges() {
            if segments_cross(ps.point(u), ps.point(v), ps.point(x), ps.point(y)) {
                return true;
            }
        }
    }
    let vertex_inside = |outer: &Polygon, inner: &Polygon| {
        inner.vertices().iter().any(|&q| !outer.has_vertex(q) && contains_strict(outer, ps, ps.point(q)))
    };
    vertex_inside(a, b) || vertex_inside(b, a) || probe_inside(a, ps, pb) || probe_inside(b, ps, pa)
}

/// C2 (pairwise interior-disjointness) and C3 (exact area identity with the
/// hull plus containment).
pub fn check_disjoint_and_cover(decomp: &Decomposition, ps: &PointSet) -> (Check, Check) {
    let boxes = bboxes(decomp, ps);
    let probes: Vec<_> = decomp.cells.iter().map(|c| interior_probe(c, ps)).collect();
    let mut order: Vec<usize> = (0..decomp.cells.len()).collect();
    order.sort_by_key(|&i| boxes[i].0.x);
    let mut overlaps = Vec::new();
    for (oi, &i) in order.iter().enumerate() {
        for &j in &order[oi + 1..] {
            if boxes[j].0.x > boxes[i].1.x {
                break;
            }
            let (bi, bj) = (&boxes[i], &boxes[j]);
            if bj.0.y > bi.1.y || bi.0.y > bj.1.y {
                continue;
            }
            if interiors_overlap(&decomp.cells[i], &decomp.cells[j], probes[i], probes[j], ps) {
                overlaps.push(Witness::Overlap { a: i.min(j), b: i.max(j) });
            }
        }
    }
    overlaps.sort_by_key(|w| match w {
        Witness::Overlap { a, b } => (*a, *b),
        _ => (0, 0),
    });

    let mut cover = Vec::new();
    match convex_hull(ps) {
        Ok(hull) => {
            let hull_area = area2(&hull, ps);
            let total: i128 = decomp.cells.iter().map(|c| area2(c, ps)).sum();
            if total != hull_area {
                cover.push(Witness::Area { cells: total, hull: hull_area });
            }
            for (ci, cell) in decomp.cells.iter().enumerate() {
                // a vertex outside the hull would have to be a point of the
                // set outside its own hull
                if let Some(&q) = cell.vertices().iter().find(|&&q| {
                    !hull.has_vertex(q) && !contains_strict(&hull, ps, ps.point(q))
                }) {
                    cover.push(Witness::BadCell { cell: ci, reason: format!("vertex {q} outside hull") });
                }
            }
        }
        Err(e) => cover.push(Witness::BadCell { cell: usize::MAX, reason: e.to_string() }),
    }
    (Check::new("c2_disjoint", overlaps), Check::new("c3_cover", cover))
}

/// Index from directed edge to the cell that owns it.
pub(crate) fn edge_owners(cells: &[Polygon]) -> HashMap<(usize, usize), usize> {
    let mut map = HashMap::with_capacity(cells.len() * 4);
    for (i, c) in cells.iter().enumerate() {
        for e in c.edges() {
            map.insert(e, i);
        }
    }
    map
}

/// Minimality: no two edge-adjacent cells have a convex union.
pub fn check_minimality(decomp: &Decomposition, ps: &PointSet) -> Check {
    let owners = edge_owners(&decomp.cells);
    let mut w = Vec::new();
    for (i, cell) in decomp.cells.iter().enumerate() {
        for (u, v) in cell.edges() {
            if let Some(&j) = owners.get(&(v, u)) {
                if i < j && convex_join(cell, &decomp.cells[j], ps).is_some() {
                    w.push(Witness::Mergeable { a: i, b: j });
                }
            }
        }
    }
    Check::new("minimal", w)
}

/// Cell count against the closed-form bounds.
pub fn check_bounds(decomp: &Decomposition, rs: &RadialStructure, c: usize) -> BoundCounts {
    BoundCounts::new(decomp.len(), rs.n(), c, rs.k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::baseline_decompose;
    use crate::decomposition::Source;

    fn ps(v: &[(i64, i64)]) -> PointSet {
        PointSet::new(v.iter().map(|&p| p.into()).collect()).unwrap()
    }

    fn five() -> PointSet {
        ps(&[(0, 0), (4, 0), (5, 3), (2, 1), (0, 4)])
    }

    #[test]
    fn baseline_five_point_passes() {
        let s = five();
        let d = baseline_decompose(&s).unwrap();
        let r = verify(&d, &s);
        assert!(r.passed(), "{r}");
        assert_eq!(r.counts.cells, 3);
        assert_eq!(r.counts.baseline_slack(), 0);
    }

    #[test]
    fn fan_triangulation_is_empty() {
        let s = five();
        // p1 fan over radial order 0,1,3,2,4 plus the hull pocket is empty here
        let cells = vec![
            Polygon::triangle(0, 1, 3, &s),
            Polygon::triangle(0, 3, 2, &s),
            Polygon::triangle(0, 2, 4, &s),
            Polygon::triangle(1, 2, 3, &s),
        ];
        let d = Decomposition::new(cells, Source::External);
        assert!(check_emptiness(&d, &s).passed());
        let (c2, c3) = check_disjoint_and_cover(&d, &s);
        assert!(c2.passed() && c3.passed());
    }

    #[test]
    fn square_with_interior_point_fails_emptiness() {
        let s = ps(&[(0, 0), (4, 0), (4, 4), (0, 4), (1, 2)]);
        let d = Decomposition::new(vec![Polygon::from_ccw(vec![0, 1, 2, 3])], Source::External);
        let c1 = check_emptiness(&d, &s);
        assert_eq!(c1.witnesses, vec![Witness::PointInCell { point: 4, cell: 0 }]);
        assert_eq!(c1.to_string(), "CHECK c1_empty FAIL point=4 cell=0;");
    }

    #[test]
    fn duplicate_cell_fails_cover_and_disjointness() {
        let s = five();
        let mut d = baseline_decompose(&s).unwrap();
        d.cells.push(d.cells[0].clone());
        let (c2, c3) = check_disjoint_and_cover(&d, &s);
        assert!(!c3.passed());
        assert!(matches!(c3.witnesses[0], Witness::Area { cells: 36, hull: 32 }));
        assert_eq!(c2.witnesses, vec![Witness::Overlap { a: 0, b: 3 }]);
    }

    #[test]
    fn overlapping_neighbour_is_reported() {
        let s = five();
        // replace triangle p1 p2 p3 by p1 p2 p4, which overlaps the A_2 quad
        let cells = vec![
            Polygon::triangle(0, 1, 2, &s),
            Polygon::from_ccw(vec![0, 3, 2, 4]),
            Polygon::triangle(1, 3, 2, &s),
        ];
        let d = Decomposition::new(cells, Source::External);
        let (c2, _) = check_disjoint_and_cover(&d, &s);
        assert!(c2.witnesses.contains(&Witness::Overlap { a: 0, b: 1 }));
        assert!(!check_emptiness(&d, &s).passed());
    }

    #[test]
    fn minimality_examples() {
        let s = ps(&[(0, 0), (4, 0), (5, 3), (0, 4)]);
        let d = Decomposition::new(vec![Polygon::triangle(0, 1, 2, &s), Polygon::triangle(0, 2, 3, &s)], Source::External);
        assert_eq!(check_minimality(&d, &s).witnesses, vec![Witness::Mergeable { a: 0, b: 1 }]);
        let single = Decomposition::new(vec![Polygon::from_ccw(vec![0, 1, 2, 3])], Source::External);
        let r = verify(&single, &s);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn bound_arithmetic() {
        let b = BoundCounts::new(16, 15, 3, 4);
        assert_eq!(b.theorem_target, 18);
        assert_eq!(b.theorem_slack(), -2);
        assert_eq!(b.baseline_slack(), 0);
        let t = BoundCounts::new(1, 3, 3, 1);
        assert_eq!(t.theorem_target, 1);
        assert_eq!(t.theorem_slack(), 0);
    }

    #[test]
    fn report_lines() {
        let s = five();
        let d = baseline_decompose(&s).unwrap();
        let text = verify(&d, &s).to_string();
        assert!(text.starts_with("CHECK convex PASS\nCHECK c1_empty PASS\n"));
        assert!(text.contains("COUNT cells=3 n=5 c=4 k=2"));
    }

    #[test]
    fn malformed_cell_reported() {
        let s = five();
        let d = Decomposition::new(vec![Polygon::from_ccw(vec![0, 4, 2, 1])], Source::External);
        let r = verify(&d, &s);
        assert!(!r.convex.passed());
        assert!(!r.passed());
    }
}
