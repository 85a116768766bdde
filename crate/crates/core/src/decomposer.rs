//! Top-level dispatcher.
//!
//! With `k` A-blocks the radial construction gives `n + k - c` cells, which
//! is within `10n/7 - c` when `7k <= 3n`. A ± set (`2k = n`) goes to the
//! block construction. Between the two, an alternating skeleton `P'` is
//! extracted (one plus point per A-block, one minus point per B-block, plus
//! ranks 1, 2 and n), decomposed by the block construction, and the
//! remaining points are inserted one by one. Every branch ends with a
//! minimalization pass.

use std::collections::HashMap;

use crate::baseline::{baseline_with, HullInfo};
use crate::decomposition::{Branch, Decomposition, DiscrepancyKind, Source};
use crate::error::{Error, Result};
use crate::geom::{convex_join, cross, in_triangle_interior, is_convex, Polygon, PointSet};
use crate::pm::pm_with;
use crate::radial::RadialStructure;
use crate::verifier::edge_owners;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrategyChoice {
    pub branch: Branch,
    pub n: usize,
    pub k: usize,
}

impl StrategyChoice {
    /// `3n/7` as an exact fraction `(3n, 7)`.
    pub fn small_k_threshold(&self) -> (usize, usize) {
        (3 * self.n, 7)
    }
}

/// `7k <= 3n` selects the radial construction, `2k = n` the block
/// construction, anything else the skeleton strategy.
pub fn choose_strategy(rs: &RadialStructure) -> StrategyChoice {
    let (n, k) = (rs.n(), rs.k);
    let branch = if 7 * k <= 3 * n {
        Branch::BaselineSmallK
    } else if 2 * k == n {
        Branch::PmExact
    } else {
        Branch::Hybrid
    };
    StrategyChoice { branch, n, k }
}

/// The alternating subset and the points left over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PmSkeleton {
    /// Point indices of `P'`, ascending.
    pub points: Vec<usize>,
    /// Representative of each A-block; `None` for an empty block.
    pub q: Vec<Option<usize>>,
    /// Representative of each B-block.
    pub r: Vec<usize>,
    /// Points of `P_n - P'` strictly inside `Conv(P')`, ascending.
    pub interior: Vec<usize>,
    /// Points of `P_n - P'` outside `Conv(P')`, ascending.
    pub exterior: Vec<usize>,
}

/// Picks `q_j` in every nonempty A-block and `r_j` in every B-block. `q_j`
/// is the highest point of the block (ties: greater x) when the block is
/// interior to the hull, else its highest-ranked hull vertex. `r_j` is the
/// lowest point of the B-block (ties: greater x).
pub fn extract_pm_subset(rs: &RadialStructure, ps: &PointSet, hull: &HullInfo) -> Result<PmSkeleton> {
    let q: Vec<Option<usize>> = rs
        .blocks_a
        .iter()
        .map(|run| {
            let members: Vec<usize> = run.ranks().map(|r| rs.p(r)).collect();
            if members.iter().all(|&v| !hull.on_hull[v]) {
                members.iter().copied().max_by_key(|&v| (ps.point(v).y, ps.point(v).x))
            } else {
                members.iter().copied().filter(|&v| hull.on_hull[v]).max_by_key(|&v| rs.rank_of[v])
            }
        })
        .collect();
    let r: Vec<usize> = rs
        .blocks_b
        .iter()
        .map(|run| run.ranks().map(|r| rs.p(r)).min_by_key(|&v| (ps.point(v).y, -ps.point(v).x)).expect("nonempty B-block"))
        .collect();
    let mut points = vec![rs.p(1), rs.p(2), rs.p(rs.n())];
    points.extend(q.iter().flatten());
    points.extend(&r);
    points.sort_unstable();
    let sub = ps.subset(&points);
    let sub_hull = crate::geom::convex_hull(&sub)?;
    let mut in_skeleton = vec![false; ps.len()];
    for &v in &points {
        in_skeleton[v] = true;
    }
    let (mut interior, mut exterior) = (Vec::new(), Vec::new());
    for v in (0..ps.len()).filter(|&v| !in_skeleton[v]) {
        let inside = crate::geom::contains_strict(&sub_hull, &sub, ps.point(v));
        if inside {
            interior.push(v);
        } else {
            exterior.push(v);
        }
    }
    Ok(PmSkeleton { points, q, r, interior, exterior })
}

/// Cuts a convex cell at a strictly interior point into three convex cells.
/// The three cut vertices form a triangle around `p`: the fan triangle from
/// the cell's first vertex that contains `p`.
pub fn split_cell_at_interior_point(cell: &Polygon, p: usize, ps: &PointSet) -> Result<[Polygon; 3]> {
    let v = cell.vertices();
    let m = v.len();
    let pt = ps.point(p);
    let j = (1..m - 1)
        .find(|&j| in_triangle_interior(pt, ps.point(v[0]), ps.point(v[j]), ps.point(v[j + 1])))
        .ok_or(Error::NotInterior { point: p })?;
    let piece = |from: usize, to: usize| {
        let mut c = vec![p];
        c.extend((from..=to).map(|i| v[i % m]));
        Polygon::from_ccw(c)
    };
    Ok([piece(0, j), piece(j, j + 1), piece(j + 1, m)])
}

/// Visible hull chain from an outside point: `(first, last)` positions in
/// the counterclockwise hull such that edges `first..last` face `p`.
fn visible_chain(hull: &[usize], p: usize, ps: &PointSet) -> Option<(usize, usize)> {
    let h = hull.len();
    let visible = |e: usize| ps.orient(hull[e], hull[(e + 1) % h], p) < 0;
    let start = (0..h).find(|&e| visible(e) && !visible((e + h - 1) % h))?;
    let mut end = start;
    while visible((end + 1) % h) {
        end = (end + 1) % h;
    }
    Some((start, end))
}

/// Adds the fan from an outside point over the visible hull chain and
/// updates the counterclockwise hull. Returns the number of cells added.
/// Two fan triangles never form a convex union (the hull vertex between
/// them becomes reflex), so the fan is left for the final minimalization to
/// merge with its neighbours.
fn attach_exterior(cells: &mut Vec<Polygon>, hull: &mut Vec<usize>, p: usize, ps: &PointSet) -> Result<usize> {
    let (start, end) = visible_chain(hull, p, ps).ok_or(Error::NotInterior { point: p })?;
    let h = hull.len();
    let count = (end + h - start) % h + 1;
    for i in 0..count {
        let (u, v) = (hull[(start + i) % h], hull[(start + i + 1) % h]);
        cells.push(Polygon::from_ccw(vec![v, u, p]));
    }
    // chain[1..count] leave the hull, p enters after chain[0]
    let mut next = Vec::with_capacity(h + 1 - (count - 1));
    for i in 0..h {
        let pos = (i + h - start) % h;
        if pos == 0 {
            next.push(hull[i]);
            next.push(p);
        } else if pos >= count {
            next.push(hull[i]);
        }
    }
    *hull = next;
    Ok(count)
}

/// Inserts a point lying outside the union of the cells (which must be a
/// convex region) and returns the grown decomposition.
pub fn insert_exterior_point(mut decomp: Decomposition, p: usize, ps: &PointSet) -> Result<Decomposition> {
    let mut vertices: Vec<usize> = decomp.cells.iter().flat_map(|c| c.vertices().iter().copied()).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let sub = ps.subset(&vertices);
    let local = crate::geom::convex_hull(&sub)?;
    let mut hull: Vec<usize> = local.vertices().iter().map(|&i| vertices[i]).collect();
    let added = attach_exterior(&mut decomp.cells, &mut hull, p, ps)?;
    decomp.accounting.exterior_inserted += 1;
    decomp.accounting.exterior_cells_added += added;
    Ok(decomp)
}

/// Merges edge-adjacent cells whose union is convex until no such pair is
/// left. Cells are visited in index order; a cell keeps absorbing
/// neighbours before the scan moves on, and surviving cells keep their
/// relative order.
pub fn minimalize(mut decomp: Decomposition, ps: &PointSet) -> Decomposition {
    let mut cells: Vec<Option<Polygon>> = decomp.cells.drain(..).map(Some).collect();
    let mut owners: HashMap<(usize, usize), usize> =
        edge_owners(&cells.iter().map(|c| c.clone().expect("cell")).collect::<Vec<_>>());
    for i in 0..cells.len() {
        while let Some(cell) = cells[i].as_ref() {
            let found = cell.edges().find_map(|(u, v)| {
                let &j = owners.get(&(v, u))?;
                convex_join(cell, cells[j].as_ref().expect("live owner"), ps).map(|joined| (j, joined))
            });
            let Some((j, joined)) = found else { break };
            let cell = cells[i].take().expect("live cell");
            let other = cells[j].take().expect("live owner");
            for e in other.edges().chain(cell.edges()) {
                owners.remove(&e);
            }
            for e in joined.edges() {
                owners.insert(e, i);
            }
            cells[i] = Some(joined);
        }
    }
    decomp.cells = cells.into_iter().flatten().collect();
    decomp
}

/// Minimal convex decomposition by the strategy of [`choose_strategy`].
pub fn decompose(ps: &PointSet) -> Result<Decomposition> {
    let rs = RadialStructure::build(ps)?;
    let hull = HullInfo::new(ps)?;
    let choice = choose_strategy(&rs);
    let mut d = match choice.branch {
        Branch::BaselineSmallK => {
            let d = baseline_with(&rs, ps, &hull);
            let pre = d.len();
            let mut d = minimalize(d, ps);
            d.accounting.pre_minimalize = Some(pre);
            d
        }
        Branch::PmExact => pm_with(&rs, ps, &hull)?,
        Branch::Hybrid => hybrid(&rs, ps, &hull)?,
    };
    d.accounting.branch = Some(choice.branch);
    d.source = Source::Main;
    Ok(d)
}

fn hybrid(rs: &RadialStructure, ps: &PointSet, hull: &HullInfo) -> Result<Decomposition> {
    let skel = extract_pm_subset(rs, ps, hull)?;
    let sub = ps.subset(&skel.points);
    let sub_rs = RadialStructure::build(&sub)?;
    if sub_rs.alternation_phase().is_none() {
        let mut d = baseline_with(rs, ps, hull);
        d.accounting.discrepancy(
            DiscrepancyKind::Skeleton,
            format!("skeleton of {} points does not alternate; radial construction used", skel.points.len()),
        );
        d.accounting.fallbacks += 1;
        let pre = d.len();
        let mut d = minimalize(d, ps);
        d.accounting.pre_minimalize = Some(pre);
        return Ok(d);
    }
    let sub_hull = HullInfo::new(&sub)?;
    let skeleton = pm_with(&sub_rs, &sub, &sub_hull)?;
    let mut acct = skeleton.accounting;
    let mut cells: Vec<Polygon> = skeleton
        .cells
        .iter()
        .map(|c| Polygon::from_ccw(c.vertices().iter().map(|&i| skel.points[i]).collect()))
        .collect();
    acct.n = rs.n();
    acct.c = hull.c();
    acct.k = rs.k;
    acct.skeleton_cells = Some(cells.len());
    if skel.q.iter().any(|q| q.is_none()) {
        acct.assume("empty first or last A-block contributes no skeleton point");
    }

    for &p in &skel.interior {
        let pt = ps.point(p);
        let at = cells
            .iter()
            .position(|c| {
                let (lo, hi) = c.bbox(ps);
                pt.x > lo.x && pt.x < hi.x && pt.y > lo.y && pt.y < hi.y && crate::geom::contains_strict(c, ps, pt)
            })
            .ok_or(Error::NotInterior { point: p })?;
        let pieces = split_cell_at_interior_point(&cells[at], p, ps)?;
        let [a, b, c] = pieces;
        cells[at] = a;
        cells.push(b);
        cells.push(c);
        acct.interior_inserted += 1;
    }

    let mut hull_ring: Vec<usize> = sub_hull.hull.vertices().iter().map(|&i| skel.points[i]).collect();
    let mut pending = skel.exterior.clone();
    if !pending.is_empty() {
        acct.assume("points outside the skeleton hull are attached by fans over the visible hull chain");
    }
    while !pending.is_empty() {
        // the point adding the least area cannot have another pending point
        // inside its fan
        let (pos, _) = pending
            .iter()
            .enumerate()
            .map(|(pos, &p)| (pos, fan_area2(&hull_ring, p, ps)))
            .min_by_key(|&(pos, a)| (a, pending[pos]))
            .expect("pending point");
        let p = pending.remove(pos);
        let added = attach_exterior(&mut cells, &mut hull_ring, p, ps)?;
        acct.exterior_inserted += 1;
        acct.exterior_cells_added += added;
    }

    acct.pre_minimalize = Some(cells.len());
    let d = Decomposition { cells, source: Source::Main, accounting: acct };
    Ok(minimalize(d, ps))
}

/// Twice the area added to the hull by attaching `p`.
fn fan_area2(hull: &[usize], p: usize, ps: &PointSet) -> i128 {
    let h = hull.len();
    (0..h)
        .map(|e| cross(ps.point(hull[(e + 1) % h]), ps.point(hull[e]), ps.point(p)))
        .filter(|&a| a > 0)
        .sum()
}

/// Whether every cell is convex; used by tests and debug assertions.
pub fn all_convex(d: &Decomposition, ps: &PointSet) -> bool {
    d.cells.iter().all(|c| is_convex(c, ps))
}
