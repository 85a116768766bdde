//! Block construction for alternating (±) point sets.
//!
//! Ranks `i..=i+6` with `i` in the plus role form a block `Q_i`. The polygon
//! `p1 p_i p_{i+2} p_{i+4} p_{i+6}` is cut into nine empty triangles, which
//! are then joined according to a plan chosen from the refined labels of
//! ranks `i+2`, `i+3`, `i+4` and two half-plane tests. Consecutive blocks
//! share rank `i+6`, and the two cells meeting along `p1 p_{i+6}` are joined
//! afterwards.
//!
//! Besides ± sets proper (rank 3 minus) the construction accepts the
//! opposite phase (rank 3 plus, rank 4 minus, ...), which is what skeleton
//! extraction produces when the first A-block is nonempty. Ranks before the
//! first block and after the last one are tiled by the radial construction.

use std::fmt;

use crate::baseline::{fan_triangulation, pockets_for_outline, sector_cells, star_outline, triangulate_pockets, HullInfo, SectorCells};
use crate::decomposer::minimalize;
use crate::decomposition::{Accounting, Decomposition, DiscrepancyKind, Source};
use crate::error::{Error, Result};
use crate::geom::{contains_strict, convex_join, edge_join, is_convex, is_convex_cycle, Polygon, PointSet};
use crate::radial::{RadialStructure, Refined};

/// Vertex slots of the nine base triangles; `ANCHOR` is `p1`, `j` is rank
/// `i + j` (or `i + 6 - j` in a mirrored view).
const ANCHOR: usize = 7;
const TRIANGLES: [[usize; 3]; 9] = [
    [ANCHOR, 0, 1],
    [ANCHOR, 1, 3],
    [ANCHOR, 3, 5],
    [ANCHOR, 5, 6],
    [0, 1, 2],
    [1, 2, 3],
    [2, 3, 4],
    [3, 4, 5],
    [4, 5, 6],
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBlock {
    /// Rank `i` of the first member.
    pub start: usize,
    /// True when slots run from rank `i + 6` down to `i`.
    pub mirrored: bool,
    anchor: usize,
    /// Point index by slot.
    slots: [usize; 7],
}

impl QBlock {
    /// Point index in slot `j` (0..=6), or the anchor for `ANCHOR`.
    fn v(&self, j: usize) -> usize {
        if j == ANCHOR {
            self.anchor
        } else {
            self.slots[j]
        }
    }

    /// Actual rank of slot `j`.
    pub fn rank(&self, j: usize) -> usize {
        if self.mirrored {
            self.start + 6 - j
        } else {
            self.start + j
        }
    }

    /// The same block with slots reversed.
    pub fn mirror(&self) -> QBlock {
        let mut slots = self.slots;
        slots.reverse();
        QBlock { start: self.start, mirrored: !self.mirrored, anchor: self.anchor, slots }
    }

    /// Triangle `t` (1..=9) in this view, counterclockwise.
    pub fn triangle(&self, t: usize, ps: &PointSet) -> Polygon {
        let [a, b, c] = TRIANGLES[t - 1];
        Polygon::triangle(self.v(a), self.v(b), self.v(c), ps)
    }

    pub fn triangles(&self, ps: &PointSet) -> Vec<Polygon> {
        (1..=9).map(|t| self.triangle(t, ps)).collect()
    }

    /// Point indices of the block members in rank order, anchor excluded.
    pub fn members(&self) -> Vec<usize> {
        let mut v = self.slots.to_vec();
        if self.mirrored {
            v.reverse();
        }
        v
    }
}

/// The nine triangles of the block at rank `i`.
pub fn base_triangles(i: usize, rs: &RadialStructure) -> Result<QBlock> {
    if i < 2 || i + 6 > rs.n() {
        return Err(Error::BlockOutOfRange { start: i, n: rs.n() });
    }
    let mut slots = [0; 7];
    for (j, s) in slots.iter_mut().enumerate() {
        *s = rs.p(i + j);
    }
    Ok(QBlock { start: i, mirrored: false, anchor: rs.p(1), slots })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfplaneSide {
    /// The open side of the line through slots 1 and 3 containing `p1`.
    D,
    Uside,
}

/// Side of point `q` relative to the line through slots 1 and 3 of the
/// block as viewed.
pub fn halfplane_side(q: usize, block: &QBlock, ps: &PointSet) -> Result<HalfplaneSide> {
    let (a, b) = (block.v(1), block.v(3));
    let s = ps.orient(a, b, q);
    if s == 0 {
        let mut t = [a, b, q];
        t.sort_unstable();
        return Err(Error::Collinear(t[0], t[1], t[2]));
    }
    Ok(if s == ps.orient(a, b, block.anchor) { HalfplaneSide::D } else { HalfplaneSide::Uside })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanCase {
    /// `++`, `+-` with a `--` middle.
    A1,
    /// `++`, `+-` with a `-+` middle.
    A2,
    /// `+-`, `+-`.
    B,
    /// `++`, `++` with a `--` middle.
    C1,
    /// `++`, `++` with a `-+` middle.
    C2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergePlan {
    pub case: PlanCase,
    /// Which row of the case table applied.
    pub branch: &'static str,
    /// Whether the plan is stated in the mirrored view (labels `+-`, `++`).
    pub mirrored: bool,
    /// Triangle ids (1..=9) per group, each group in joinable chain order.
    pub groups: Vec<Vec<usize>>,
    /// Case (b): the quadrilateral on slots 0, 2, 4, 6 is added.
    pub quad: bool,
}

impl MergePlan {
    fn new(case: PlanCase, branch: &'static str, groups: &[&[usize]]) -> Self {
        MergePlan { case, branch, mirrored: false, groups: groups.iter().map(|g| g.to_vec()).collect(), quad: case == PlanCase::B }
    }

    pub fn tag(&self) -> String {
        let c = match self.case {
            PlanCase::A1 => "a1",
            PlanCase::A2 => "a2",
            PlanCase::B => "b",
            PlanCase::C1 => "c1",
            PlanCase::C2 => "c2",
        };
        if self.mirrored {
            format!("mirror-{c}/{}", self.branch)
        } else {
            format!("{c}/{}", self.branch)
        }
    }
}

impl fmt::Display for MergePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.tag())?;
        for (gi, g) in self.groups.iter().enumerate() {
            let names: Vec<String> = g.iter().map(|t| format!("t{t}")).collect();
            write!(f, "{}{}", if gi == 0 { "" } else { ", " }, names.join("+"))?;
        }
        if self.quad {
            write!(f, ", q")?;
        }
        write!(f, "}}")
    }
}

/// Joins the triangles of a group in order; `None` if some join fails.
fn join_group(block: &QBlock, group: &[usize], ps: &PointSet) -> Option<Polygon> {
    let mut acc = block.triangle(group[0], ps);
    for &t in &group[1..] {
        acc = edge_join(&acc, &block.triangle(t, ps), ps).ok()?;
    }
    Some(acc)
}

fn group_is_convex(block: &QBlock, group: &[usize], ps: &PointSet) -> bool {
    join_group(block, group, ps).is_some_and(|p| is_convex(&p, ps))
}

/// Plan for the block, mirroring when the labels of ranks `i+2`, `i+4` are
/// `+-`, `++`. The returned plan's triangle ids refer to
/// [`plan_view`]`(block, plan)`.
pub fn select_merge_plan(block: &QBlock, rs: &RadialStructure, ps: &PointSet) -> Result<MergePlan> {
    let label = |r: usize| rs.refined_label(r);
    let i = block.start;
    if label(i + 2) == Some(Refined::PM) && label(i + 4) == Some(Refined::PP) {
        let mut plan = plan_in_view(&block.mirror(), rs, ps)?;
        plan.mirrored = !block.mirrored;
        return Ok(plan);
    }
    plan_in_view(block, rs, ps)
}

/// The block as seen by a plan.
pub fn plan_view(block: &QBlock, plan: &MergePlan) -> QBlock {
    if plan.mirrored != block.mirrored {
        block.mirror()
    } else {
        block.clone()
    }
}

fn plan_in_view(view: &QBlock, rs: &RadialStructure, ps: &PointSet) -> Result<MergePlan> {
    let label = |j: usize| rs.refined_label(view.rank(j));
    let l2 = label(2);
    let l4 = label(4);
    let middle_mm = label(3) == Some(Refined::MM);
    let side = |j: usize| halfplane_side(view.v(j), view, ps);
    use HalfplaneSide::{Uside, D};
    let plan = match (l2, l4) {
        (Some(Refined::PM), Some(Refined::PM)) => {
            MergePlan::new(PlanCase::B, "quad", &[&[1], &[2, 6], &[3, 8], &[4], &[5], &[7], &[9]])
        }
        (Some(Refined::PP), Some(Refined::PM)) if middle_mm => {
            if side(0)? == D {
                if group_is_convex(view, &[6, 7, 8], ps) {
                    MergePlan::new(PlanCase::A1, "d-pentagon", &[&[1, 2], &[3], &[4], &[5], &[6, 7, 8], &[9]])
                } else {
                    MergePlan::new(PlanCase::A1, "d-split", &[&[1, 2], &[3, 8], &[4], &[5], &[6, 7], &[9]])
                }
            } else if group_is_convex(view, &[5, 6, 7, 8], ps) {
                MergePlan::new(PlanCase::A1, "u-hexagon", &[&[1], &[2], &[3], &[4], &[5, 6, 7, 8], &[9]])
            } else {
                MergePlan::new(PlanCase::A1, "u-split", &[&[1], &[2], &[3, 8], &[4], &[5, 6, 7], &[9]])
            }
        }
        (Some(Refined::PP), Some(Refined::PP)) if middle_mm => {
            if side(0)? == D && !group_is_convex(view, &[5, 6, 7, 8], ps) {
                MergePlan::new(PlanCase::C1, "d-split", &[&[1, 2], &[3], &[4], &[5], &[6, 7, 8], &[9]])
            } else {
                let branch = if side(0)? == D { "d-hexagon" } else { "u-hexagon" };
                MergePlan::new(PlanCase::C1, branch, &[&[1], &[2], &[3], &[4], &[5, 6, 7, 8], &[9]])
            }
        }
        (Some(Refined::PP), Some(Refined::PM)) | (Some(Refined::PP), Some(Refined::PP)) => {
            let case = if l4 == Some(Refined::PM) { PlanCase::A2 } else { PlanCase::C2 };
            // the fourth row of the table also names slot 2, whose side is
            // not used by any other row; only slots 0 and 4 decide
            match (side(0)?, side(4)?) {
                (D, D) => MergePlan::new(case, "dd", &[&[1, 2, 3, 8], &[4], &[5], &[6], &[7], &[9]]),
                (Uside, D) => MergePlan::new(case, "ud", &[&[1], &[2, 3, 8], &[5, 6], &[4], &[7], &[9]]),
                (D, Uside) => MergePlan::new(case, "du", &[&[1, 2, 3], &[4], &[5], &[6, 7], &[8], &[9]]),
                (Uside, Uside) => MergePlan::new(case, "uu", &[&[1], &[2, 3], &[4], &[5, 6, 7], &[8], &[9]]),
            }
        }
        _ => return Err(Error::NotPmSet),
    };
    Ok(plan)
}

/// Cells of one block: the joined groups, plus the case-(b) quadrilateral
/// when it is an empty convex polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCells {
    pub cells: Vec<Polygon>,
    /// Ranks `i+2`, `i+4` leave the outline when the quadrilateral is used.
    pub quad: Option<Polygon>,
}

/// Joins every group of the plan. A group whose union is not convex is
/// emitted as its separate triangles and logged.
pub fn apply_merge_plan(plan: &MergePlan, block: &QBlock, ps: &PointSet, acct: &mut Accounting) -> BlockCells {
    let view = plan_view(block, plan);
    let mut cells = Vec::with_capacity(plan.groups.len() + 1);
    for g in &plan.groups {
        if g.len() == 1 {
            cells.push(view.triangle(g[0], ps));
            continue;
        }
        match join_group(&view, g, ps) {
            Some(p) if is_convex(&p, ps) => cells.push(p),
            _ => {
                let names: Vec<String> = g.iter().map(|t| format!("t{t}")).collect();
                acct.discrepancy(
                    DiscrepancyKind::PlanGroup,
                    format!("block {} plan {}: {} is not convex", block.start, plan.tag(), names.join("+")),
                );
                acct.fallbacks += 1;
                cells.extend(g.iter().map(|&t| view.triangle(t, ps)));
            }
        }
    }
    let mut quad = None;
    if plan.quad {
        let cycle = vec![view.v(6), view.v(4), view.v(2), view.v(0)];
        let usable = is_convex_cycle(&cycle, ps) && {
            let q = Polygon::from_ccw(cycle.clone());
            [1, 3, 5].iter().all(|&j| !contains_strict(&q, ps, ps.point(view.v(j))))
        };
        if usable {
            let q = Polygon::from_ccw(cycle);
            cells.push(q.clone());
            quad = Some(q);
        } else {
            acct.discrepancy(
                DiscrepancyKind::CaseBQuad,
                format!("block {}: quadrilateral on ranks {}, {}, {}, {} is not an empty convex polygon", block.start, block.start, block.start + 2, block.start + 4, block.start + 6),
            );
            acct.fallbacks += 1;
        }
    }
    BlockCells { cells, quad }
}

/// Joins the two cells meeting along `p1 p_r` for every shared block rank
/// `r`. A non-convex union is skipped and logged.
pub fn merge_across_blocks(cells: &mut Vec<Polygon>, boundary_ranks: &[usize], rs: &RadialStructure, ps: &PointSet, acct: &mut Accounting) {
    let anchor = rs.p(1);
    for &r in boundary_ranks {
        let v = rs.p(r);
        acct.merges_attempted += 1;
        let lower = cells.iter().position(|c| c.has_edge(v, anchor));
        let upper = cells.iter().position(|c| c.has_edge(anchor, v));
        let (Some(a), Some(b)) = (lower, upper) else {
            acct.discrepancy(DiscrepancyKind::CrossMerge, format!("no cells meet along p1 p{r}"));
            continue;
        };
        match convex_join(&cells[a], &cells[b], ps) {
            Some(joined) => {
                cells[a] = joined;
                cells.remove(b);
                acct.merges_applied += 1;
            }
            None => acct.discrepancy(
                DiscrepancyKind::CrossMerge,
                format!("cells {} and {} across p1 p{r} do not form a convex polygon", cells[a], cells[b]),
            ),
        }
    }
}

/// The block construction followed by a minimalization pass. Accepts either
/// alternation phase.
pub fn pm_decompose(ps: &PointSet) -> Result<Decomposition> {
    let rs = RadialStructure::build(ps)?;
    if rs.alternation_phase().is_none() {
        return Err(Error::NotPmSet);
    }
    let hull = HullInfo::new(ps)?;
    pm_with(&rs, ps, &hull)
}

pub(crate) fn pm_with(rs: &RadialStructure, ps: &PointSet, hull: &HullInfo) -> Result<Decomposition> {
    let mut d = pm_raw(rs, ps, hull)?;
    d.accounting.pre_minimalize = Some(d.len());
    Ok(minimalize(d, ps))
}

/// Block starts for an alternating structure with the given phase.
pub fn block_starts(n: usize, phase: usize) -> Vec<usize> {
    (0..).map(|m| phase + 6 * m).take_while(|&i| i + 6 <= n).collect()
}

/// The construction without the final minimalization.
pub fn pm_raw(rs: &RadialStructure, ps: &PointSet, hull: &HullInfo) -> Result<Decomposition> {
    let phase = rs.alternation_phase().ok_or(Error::NotPmSet)?;
    let n = rs.n();
    let mut acct = Accounting { n, c: hull.c(), k: rs.k, ..Default::default() };
    let starts = block_starts(n, phase);
    acct.blocks = starts.len();
    let mut cells = Vec::new();
    let mut removed = vec![false; n + 1];
    let mut sectors = Vec::new();
    if phase > 2 {
        sectors.push((2, phase));
    }
    for &i in &starts {
        let block = base_triangles(i, rs)?;
        let plan = select_merge_plan(&block, rs, ps)?;
        let bc = apply_merge_plan(&plan, &block, ps, &mut acct);
        if bc.quad.is_some() {
            acct.case_b += 1;
            removed[i + 2] = true;
            removed[i + 4] = true;
        }
        cells.extend(bc.cells);
    }
    let end = starts.last().map_or(phase, |&i| i + 6);
    if end < n {
        sectors.push((end, n));
    }
    for (lo, hi) in sectors {
        match sector_cells(rs, ps, lo, hi, &mut acct) {
            SectorCells::Cells(c) => cells.extend(c),
            SectorCells::NotSimple => {
                acct.fallbacks += 1;
                let mut d = Decomposition::new(fan_triangulation(rs, ps, hull), Source::Pm);
                d.accounting = acct;
                return Ok(d);
            }
        }
    }
    let boundaries: Vec<usize> = starts.iter().skip(1).copied().collect();
    merge_across_blocks(&mut cells, &boundaries, rs, ps, &mut acct);

    let outline: Vec<usize> = star_outline(rs).into_iter().filter(|&r| !removed[r]).collect();
    let t_u = triangulate_pockets(&pockets_for_outline(rs, hull, &outline), ps);
    let expected = (outline.len() + 1) as i64 - hull.c() as i64;
    if t_u.len() as i64 != expected {
        acct.discrepancy(DiscrepancyKind::CountMismatch, format!("|T_U| = {} but the outline leaves {expected}", t_u.len()));
    }
    acct.t_u = t_u.len();
    cells.extend(t_u);
    Ok(Decomposition { cells, source: Source::Pm, accounting: acct })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::area2;
    use crate::verifier::verify;

    fn ps(v: &[(i64, i64)]) -> PointSet {
        PointSet::new(v.iter().map(|&p| p.into()).collect()).unwrap()
    }

    /// Hand-made ± set on 8 points: plus points on a wide arc, minus points
    /// pulled towards the anchor.
    fn eight() -> PointSet {
        ps(&[(0, 0), (1000, 10), (400, 150), (900, 700), (300, 500), (100, 1000), (-150, 450), (-900, 600)])
    }

    #[test]
    fn eight_is_pm() {
        let rs = RadialStructure::build(&eight()).unwrap();
        assert!(rs.is_pm_set(), "{:?}", rs.signs);
    }

    #[test]
    fn base_triangle_ranks() {
        let s = eight();
        let rs = RadialStructure::build(&s).unwrap();
        let b = base_triangles(2, &rs).unwrap();
        let want: [[usize; 3]; 9] =
            [[1, 2, 3], [1, 3, 5], [1, 5, 7], [1, 7, 8], [2, 3, 4], [3, 4, 5], [4, 5, 6], [5, 6, 7], [6, 7, 8]];
        for (t, w) in want.iter().enumerate() {
            let tri = b.triangle(t + 1, &s);
            let mut got: Vec<usize> = tri.vertices().iter().map(|&v| rs.rank_of[v]).collect();
            got.sort_unstable();
            assert_eq!(got, w.to_vec());
        }
        assert!(base_triangles(3, &rs).is_err());
        // the nine triangles tile p1 p2 p4 p6 p8
        let q = Polygon::new(vec![rs.p(1), rs.p(2), rs.p(4), rs.p(6), rs.p(8)], &s).unwrap();
        let total: i128 = b.triangles(&s).iter().map(|t| area2(t, &s)).sum();
        assert_eq!(total, area2(&q, &s));
    }

    #[test]
    fn mirror_maps_triangles() {
        let s = eight();
        let rs = RadialStructure::build(&s).unwrap();
        let b = base_triangles(2, &rs).unwrap();
        let m = b.mirror();
        for (x, y) in [(1, 4), (2, 3), (5, 9), (6, 8), (7, 7)] {
            assert_eq!(m.triangle(x, &s), b.triangle(y, &s));
        }
        assert_eq!(m.mirror(), b);
    }

    #[test]
    fn halfplane_sides() {
        let s = eight();
        let rs = RadialStructure::build(&s).unwrap();
        let b = base_triangles(2, &rs).unwrap();
        assert_eq!(halfplane_side(rs.p(1), &b, &s).unwrap(), HalfplaneSide::D);
        // slot 2 is plus, beyond the chord of its neighbours
        assert_eq!(halfplane_side(rs.p(4), &b, &s).unwrap(), HalfplaneSide::Uside);
    }

    #[test]
    fn plan_sizes_and_pipeline() {
        let s = eight();
        let rs = RadialStructure::build(&s).unwrap();
        let b = base_triangles(2, &rs).unwrap();
        let plan = select_merge_plan(&b, &rs, &s).unwrap();
        let mut seen: Vec<usize> = plan.groups.concat();
        seen.sort_unstable();
        assert_eq!(seen, (1..=9).collect::<Vec<_>>());
        assert_eq!(plan.groups.len(), if plan.quad { 7 } else { 6 });
        let d = pm_decompose(&s).unwrap();
        let r = verify(&d, &s);
        assert!(r.passed(), "{r}");
        let a = &d.accounting;
        assert_eq!(a.merges_attempted, 0);
        assert_eq!(a.pre_minimalize, Some(plan.groups.len() + usize::from(a.case_b > 0) + a.t_u));
    }

    #[test]
    fn case_b_quad() {
        // slots 2 and 4 sit inside the triangles of their plus neighbours
        let s = ps(&[(0, 0), (996, 87), (89, 45), (225, 268), (31, 95), (-31, 349), (-45, 89), (-766, 643)]);
        let rs = RadialStructure::build(&s).unwrap();
        assert!(rs.is_pm_set());
        assert_eq!(rs.refined_label(4), Some(Refined::PM));
        assert_eq!(rs.refined_label(6), Some(Refined::PM));
        let b = base_triangles(2, &rs).unwrap();
        let plan = select_merge_plan(&b, &rs, &s).unwrap();
        assert_eq!(plan.case, PlanCase::B);
        let mut acct = Accounting::default();
        let bc = apply_merge_plan(&plan, &b, &s, &mut acct);
        assert_eq!(bc.cells.len(), 8);
        assert_eq!(bc.quad, Some(Polygon::new(vec![rs.p(2), rs.p(4), rs.p(6), rs.p(8)], &s).unwrap()));
        assert!(acct.discrepancies.is_empty());
        let d = pm_decompose(&s).unwrap();
        assert!(verify(&d, &s).passed());
    }

    #[test]
    fn forced_group_failure_falls_back() {
        let s = eight();
        let rs = RadialStructure::build(&s).unwrap();
        let b = base_triangles(2, &rs).unwrap();
        // t5 and t9 share no edge, so the group cannot be joined
        let plan = MergePlan { case: PlanCase::A1, branch: "forced", mirrored: false, groups: vec![vec![1], vec![2], vec![3], vec![4], vec![5, 9], vec![6], vec![7], vec![8]], quad: false };
        let mut acct = Accounting::default();
        let bc = apply_merge_plan(&plan, &b, &s, &mut acct);
        assert_eq!(bc.cells.len(), 9);
        assert_eq!(acct.discrepancies.len(), 1);
        assert_eq!(acct.discrepancies[0].kind, DiscrepancyKind::PlanGroup);
    }

    #[test]
    fn not_pm_rejected() {
        // convex position: every signed rank is plus
        let s = ps(&[(0, 0), (10, 1), (14, 6), (12, 12), (5, 15), (-3, 9)]);
        assert_eq!(pm_decompose(&s).unwrap_err(), Error::NotPmSet);
    }

    #[test]
    fn block_start_arithmetic() {
        assert_eq!(block_starts(8, 2), vec![2]);
        assert_eq!(block_starts(14, 2), vec![2, 8]);
        assert_eq!(block_starts(13, 2), vec![2]);
        assert_eq!(block_starts(9, 3), vec![3]);
        assert!(block_starts(7, 2).is_empty());
    }
}
