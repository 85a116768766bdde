//! The radial construction with `n + k - c` cells.
//!
//! The fan region below the star polygon `V` (anchor, rank 2, every plus
//! point, rank n) is tiled by one convex polygon per A-block, one per
//! B-block, and `|B_j| - 1` fan triangles per B-block. The pockets between
//! `V` and the hull are triangulated by ear clipping.
//!
//! Every convexity the construction relies on is checked at runtime. A
//! failing cell is replaced by a triangulation of the same region and the
//! failure is recorded as a discrepancy, so the output is always a valid
//! decomposition.

use crate::decomposition::{Accounting, Decomposition, DiscrepancyKind, Source};
use crate::error::Result;
use crate::geom::{convex_hull, is_convex, is_convex_cycle, Polygon, PointSet};
use crate::radial::{RadialStructure, Run, Sign};

/// The star polygon and the pockets between it and the hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PocketSet {
    pub star: Polygon,
    pub pockets: Vec<Polygon>,
}

/// Hull facts needed by the constructions.
#[derive(Clone, Debug)]
pub struct HullInfo {
    pub hull: Polygon,
    pub on_hull: Vec<bool>,
}

impl HullInfo {
    pub fn new(ps: &PointSet) -> Result<Self> {
        let hull = convex_hull(ps)?;
        let mut on_hull = vec![false; ps.len()];
        for &v in hull.vertices() {
            on_hull[v] = true;
        }
        Ok(HullInfo { hull, on_hull })
    }

    pub fn c(&self) -> usize {
        self.hull.len()
    }
}

/// Convex polygon of A-block `j` (0-based): the anchor, the block and its two
/// flanking ranks. An empty first (last) block yields the triangle on ranks
/// 1, 2, 3 (1, n-1, n).
pub fn build_a_polygon(j: usize, rs: &RadialStructure) -> Polygon {
    a_polygon_for_run(rs.blocks_a[j], rs)
}

fn a_polygon_for_run(run: Run, rs: &RadialStructure) -> Polygon {
    let mut v = vec![rs.p(1)];
    v.extend((run.lower_flank()..=run.upper_flank()).map(|r| rs.p(r)));
    Polygon::from_ccw(v)
}

/// Polygon of B-block `j` (0-based) with its two flanking plus ranks. The
/// radial chain is reversed so that a convex block comes out
/// counterclockwise; convexity is not checked here.
pub fn build_b_polygon(j: usize, rs: &RadialStructure) -> Polygon {
    Polygon::from_ccw(b_cycle(rs.blocks_b[j], rs))
}

fn b_cycle(run: Run, rs: &RadialStructure) -> Vec<usize> {
    (run.lower_flank()..=run.upper_flank()).rev().map(|r| rs.p(r)).collect()
}

/// Fan triangles `p1 p_m p_{m+1}` inside every B-block.
pub fn build_b_fans(rs: &RadialStructure) -> Vec<Polygon> {
    rs.blocks_b.iter().flat_map(|&run| b_fans_for_run(run, rs)).collect()
}

fn b_fans_for_run(run: Run, rs: &RadialStructure) -> Vec<Polygon> {
    (run.start..run.upper_flank() - 1)
        .map(|m| Polygon::from_ccw(vec![rs.p(1), rs.p(m), rs.p(m + 1)]))
        .collect()
}

/// Pockets between the star polygon `V` and the hull.
pub fn compute_pockets(rs: &RadialStructure, ps: &PointSet) -> Result<PocketSet> {
    let hull = HullInfo::new(ps)?;
    let outline = star_outline(rs);
    Ok(pockets_for_outline(rs, &hull, &outline))
}

/// Ranks of `V` without the anchor: 2, the plus ranks, n.
pub fn star_outline(rs: &RadialStructure) -> Vec<usize> {
    let n = rs.n();
    let mut out = vec![2];
    out.extend(rs.plus_ranks());
    out.push(n);
    out
}

/// Pockets of an outline given as ascending ranks starting at 2 and ending
/// at n. Every hull vertex except the anchor must appear in the outline; the
/// pocket between consecutive hull vertices `h_a`, `h_b` is the hull edge
/// followed by the outline chain walked backwards.
pub fn pockets_for_outline(rs: &RadialStructure, hull: &HullInfo, outline: &[usize]) -> PocketSet {
    let mut star = vec![rs.p(1)];
    star.extend(outline.iter().map(|&r| rs.p(r)));
    let hull_pos: Vec<usize> =
        outline.iter().enumerate().filter(|(_, &r)| hull.on_hull[rs.p(r)]).map(|(i, _)| i).collect();
    debug_assert_eq!(hull_pos.len() + 1, hull.c(), "outline must contain every hull vertex");
    let mut pockets = Vec::new();
    for w in hull_pos.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b > a + 1 {
            let mut v = vec![rs.p(outline[a]), rs.p(outline[b])];
            v.extend((a + 1..b).rev().map(|i| rs.p(outline[i])));
            pockets.push(Polygon::from_ccw(v));
        }
    }
    PocketSet { star: Polygon::from_ccw(star), pockets }
}

/// Ear-clipping triangulation of every pocket.
pub fn triangulate_pockets(pockets: &PocketSet, ps: &PointSet) -> Vec<Polygon> {
    pockets.pockets.iter().flat_map(|p| ear_clip(p.vertices(), ps)).collect()
}

/// Triangulates a simple counterclockwise polygon. Among the current ears
/// the one at the smallest point index is cut first.
pub fn ear_clip(vertices: &[usize], ps: &PointSet) -> Vec<Polygon> {
    let mut ring = vertices.to_vec();
    let mut out = Vec::with_capacity(ring.len().saturating_sub(2));
    while ring.len() > 3 {
        let m = ring.len();
        let ear = (0..m)
            .filter(|&i| {
                let (a, b, c) = (ring[(i + m - 1) % m], ring[i], ring[(i + 1) % m]);
                ps.orient(a, b, c) > 0
                    && ring.iter().all(|&q| q == a || q == b || q == c || !ps.in_triangle(q, a, b, c))
            })
            .min_by_key(|&i| ring[i]);
        let Some(i) = ear else {
            // not simple or not counterclockwise; no ear exists
            break;
        };
        let (a, b, c) = (ring[(i + m - 1) % m], ring[i], ring[(i + 1) % m]);
        out.push(Polygon::from_ccw(vec![a, b, c]));
        ring.remove(i);
    }
    if ring.len() == 3 {
        out.push(Polygon::from_ccw(ring));
    }
    out
}

/// Outcome of tiling the fan region of a rank interval.
pub(crate) enum SectorCells {
    Cells(Vec<Polygon>),
    /// A B-chain crossed its chord; the region below `V` is not what the
    /// construction assumes.
    NotSimple,
}

/// A-, B- and fan cells over ranks `lo..=hi`, where `lo` and `hi` play the
/// role of plus points (or ranks 2 and n). Runs are read from the signs of
/// `lo + 1..hi`.
pub(crate) fn sector_cells(rs: &RadialStructure, ps: &PointSet, lo: usize, hi: usize, acct: &mut Accounting) -> SectorCells {
    let mut cells = Vec::new();
    let mut r = lo + 1;
    if r >= hi || rs.sign(r) == Some(Sign::Minus) {
        push_a(Run { start: r, len: 0 }, rs, ps, &mut cells, acct);
    }
    while r < hi {
        let s = rs.sign(r);
        let start = r;
        while r < hi && rs.sign(r) == s {
            r += 1;
        }
        let run = Run { start, len: r - start };
        if s == Some(Sign::Plus) {
            push_a(run, rs, ps, &mut cells, acct);
        } else {
            if push_b(run, rs, ps, &mut cells, acct).is_err() {
                return SectorCells::NotSimple;
            }
            if r == hi {
                push_a(Run { start: hi, len: 0 }, rs, ps, &mut cells, acct);
            }
        }
    }
    SectorCells::Cells(cells)
}

fn push_a(run: Run, rs: &RadialStructure, ps: &PointSet, cells: &mut Vec<Polygon>, acct: &mut Accounting) {
    let poly = a_polygon_for_run(run, rs);
    acct.a_polygons += 1;
    if is_convex(&poly, ps) && sector_is_empty(&poly, rs, ps, run.lower_flank(), run.upper_flank()) {
        cells.push(poly);
        return;
    }
    acct.discrepancy(DiscrepancyKind::APolygon, format!("A-polygon {poly} is not an empty convex polygon"));
    acct.fallbacks += 1;
    cells.extend(
        (run.lower_flank()..run.upper_flank()).map(|m| Polygon::from_ccw(vec![rs.p(1), rs.p(m), rs.p(m + 1)])),
    );
}

fn push_b(
    run: Run,
    rs: &RadialStructure,
    ps: &PointSet,
    cells: &mut Vec<Polygon>,
    acct: &mut Accounting,
) -> std::result::Result<(), String> {
    let cycle = b_cycle(run, rs);
    acct.b_polygons += 1;
    let fans = b_fans_for_run(run, rs);
    acct.t_b += fans.len();
    cells.extend(fans);
    if is_convex_cycle(&cycle, ps) {
        let poly = Polygon::from_ccw(cycle.clone());
        if sector_is_empty(&poly, rs, ps, run.lower_flank(), run.upper_flank()) {
            cells.push(poly);
            return Ok(());
        }
    }
    acct.fallbacks += 1;
    match Polygon::new(cycle.clone(), ps) {
        // the reversed chain must already be counterclockwise for the region
        // to sit between the chain and its chord
        Ok(poly) if poly == Polygon::from_ccw(cycle.clone()) => {
            acct.discrepancy(
                DiscrepancyKind::BPolygon,
                format!("B-polygon {poly} is not convex; triangulated instead"),
            );
            cells.extend(ear_clip(poly.vertices(), ps));
            Ok(())
        }
        _ => {
            let detail = format!("B-chain over ranks {}..={} is not a simple polygon", run.lower_flank(), run.upper_flank());
            acct.discrepancy(DiscrepancyKind::BPolygonNotSimple, detail.clone());
            Err(detail)
        }
    }
}

/// Only points of rank strictly between `lo` and `hi` can lie inside a cell
/// confined to that sector; checks those that are not vertices.
fn sector_is_empty(poly: &Polygon, rs: &RadialStructure, ps: &PointSet, lo: usize, hi: usize) -> bool {
    (lo + 1..hi).map(|r| rs.p(r)).filter(|&q| !poly.has_vertex(q)).all(|q| {
        !crate::geom::contains_strict(poly, ps, ps.point(q))
    })
}

/// Triangulation used when the construction cannot proceed: fan triangles
/// over every consecutive rank pair plus the pockets of the full chain.
pub(crate) fn fan_triangulation(rs: &RadialStructure, ps: &PointSet, hull: &HullInfo) -> Vec<Polygon> {
    let n = rs.n();
    let mut cells: Vec<Polygon> = (2..n).map(|m| Polygon::from_ccw(vec![rs.p(1), rs.p(m), rs.p(m + 1)])).collect();
    let outline: Vec<usize> = (2..=n).collect();
    cells.extend(triangulate_pockets(&pockets_for_outline(rs, hull, &outline), ps));
    cells
}

/// The full radial construction. `accounting` records `|T_B|`, `|T_U|`, the
/// fallbacks taken and whether `|Γ| = n + k - c` held.
pub fn baseline_decompose(ps: &PointSet) -> Result<Decomposition> {
    let rs = RadialStructure::build(ps)?;
    let hull = HullInfo::new(ps)?;
    Ok(baseline_with(&rs, ps, &hull))
}

pub(crate) fn baseline_with(rs: &RadialStructure, ps: &PointSet, hull: &HullInfo) -> Decomposition {
    let n = rs.n();
    let mut acct = Accounting { n, c: hull.c(), k: rs.k, ..Default::default() };
    let cells = match sector_cells(rs, ps, 2, n, &mut acct) {
        SectorCells::Cells(mut cells) => {
            let pockets = pockets_for_outline(rs, hull, &star_outline(rs));
            let t_u = triangulate_pockets(&pockets, ps);
            let expected = rs.plus_count() + 3 - hull.c();
            if t_u.len() != expected {
                acct.discrepancy(
                    DiscrepancyKind::CountMismatch,
                    format!("|T_U| = {} but |A| - (c - 3) = {expected}", t_u.len()),
                );
            }
            acct.t_u = t_u.len();
            cells.extend(t_u);
            cells
        }
        SectorCells::NotSimple => {
            acct.fallbacks += 1;
            fan_triangulation(rs, ps, hull)
        }
    };
    if acct.fallbacks == 0 && cells.len() + hull.c() != n + rs.k {
        acct.discrepancy(
            DiscrepancyKind::CountMismatch,
            format!("|Γ| = {} but n + k - c = {}", cells.len(), n + rs.k - hull.c()),
        );
    }
    Decomposition { cells, source: Source::Baseline, accounting: acct }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::area2;

    fn ps(v: &[(i64, i64)]) -> PointSet {
        PointSet::new(v.iter().map(|&p| p.into()).collect()).unwrap()
    }

    fn five() -> PointSet {
        ps(&[(0, 0), (4, 0), (5, 3), (2, 1), (0, 4)])
    }

    #[test]
    fn five_point_polygons() {
        let s = five();
        let rs = RadialStructure::build(&s).unwrap();
        // A_1 empty -> triangle p1 p2 p3
        assert_eq!(build_a_polygon(0, &rs), Polygon::from_ccw(vec![0, 1, 3]));
        // A_2 = {p4} -> quad p1 p3 p4 p5 = (0,0),(2,1),(5,3),(0,4)
        let a2 = build_a_polygon(1, &rs);
        assert_eq!(a2, Polygon::from_ccw(vec![0, 3, 2, 4]));
        assert!(is_convex(&a2, &s));
        // B_1 = {p3} -> triangle p2 p3 p4, area2 7
        let b1 = build_b_polygon(0, &rs);
        assert_eq!(b1, Polygon::triangle(1, 3, 2, &s));
        assert_eq!(area2(&b1, &s), 7);
        assert!(build_b_fans(&rs).is_empty());
        let pockets = compute_pockets(&rs, &s).unwrap();
        assert!(pockets.pockets.is_empty());
    }

    #[test]
    fn five_point_baseline() {
        let s = five();
        let d = baseline_decompose(&s).unwrap();
        let mut cells = d.cells.clone();
        cells.sort();
        let mut want = vec![
            Polygon::triangle(0, 1, 3, &s),
            Polygon::from_ccw(vec![0, 3, 2, 4]),
            Polygon::triangle(1, 3, 2, &s),
        ];
        want.sort();
        assert_eq!(cells, want);
        let areas: Vec<i128> = d.cells.iter().map(|c| area2(c, &s)).collect();
        assert_eq!(areas.iter().sum::<i128>(), 32);
        assert!(d.accounting.discrepancies.is_empty());
        assert_eq!(d.len(), 5 + 2 - 4);
    }

    #[test]
    fn three_points_single_triangle() {
        let s = ps(&[(0, 0), (5, 1), (2, 6)]);
        let d = baseline_decompose(&s).unwrap();
        assert_eq!(d.cells, vec![Polygon::from_ccw(vec![0, 1, 2])]);
    }

    #[test]
    fn all_plus_is_single_fan_polygon() {
        let s = ps(&[(0, 0), (100, 1), (90, 45), (70, 72), (40, 92), (0, 100), (-40, 92)]);
        let rs = RadialStructure::build(&s).unwrap();
        assert_eq!(rs.k, 1);
        let a = build_a_polygon(0, &rs);
        assert_eq!(a.len(), 7);
        let d = baseline_decompose(&s).unwrap();
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn b_fans_for_long_run() {
        // ranks 5,6,7 minus: triangles (p1,p5,p6), (p1,p6,p7)
        let rs = RadialStructure {
            anchor: 0,
            order: (0..9).collect(),
            rank_of: (1..=9).collect(),
            signs: vec![],
            refined: vec![],
            blocks_a: vec![],
            blocks_b: vec![Run { start: 5, len: 3 }],
            k: 2,
        };
        let fans = build_b_fans(&rs);
        assert_eq!(fans, vec![Polygon::from_ccw(vec![0, 4, 5]), Polygon::from_ccw(vec![0, 5, 6])]);
    }

    #[test]
    fn interior_plus_point_makes_one_pocket() {
        // hull is the triangle p1 p2 p6; p4 = (40,28) is plus but interior
        let s = ps(&[(0, 0), (100, 1), (60, 12), (40, 28), (20, 25), (-60, 80)]);
        let rs = RadialStructure::build(&s).unwrap();
        let pockets = compute_pockets(&rs, &s).unwrap();
        assert_eq!(pockets.pockets.len(), 1);
        assert_eq!(triangulate_pockets(&pockets, &s).len(), 1);
    }

    #[test]
    fn ear_clip_counts() {
        let s = ps(&[(0, 0), (10, 0), (10, 10), (0, 10), (5, 3)]);
        assert_eq!(ear_clip(&[0, 1, 2], &s).len(), 1);
        assert_eq!(ear_clip(&[0, 1, 2, 3], &s).len(), 2);
        // non-convex pentagon with reflex vertex 4
        let tris = ear_clip(&[0, 4, 1, 2, 3], &s);
        assert_eq!(tris.len(), 3);
        let total: i128 = tris.iter().map(|t| area2(t, &s)).sum();
        assert_eq!(total, area2(&Polygon::from_ccw(vec![0, 4, 1, 2, 3]), &s));
    }

    #[test]
    fn pocket_area_identity() {
        let s = ps(&[(0, 0), (100, 2), (80, 50), (60, 90), (-50, 60), (10, 30), (30, 35), (50, 70)]);
        let rs = RadialStructure::build(&s).unwrap();
        let hull = HullInfo::new(&s).unwrap();
        let pk = compute_pockets(&rs, &s).unwrap();
        let total = area2(&pk.star, &s) + pk.pockets.iter().map(|p| area2(p, &s)).sum::<i128>();
        assert_eq!(total, area2(&hull.hull, &s));
        assert!(pk.pockets.len() <= hull.c() - 2);
    }
}
