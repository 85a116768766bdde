//! Radial labelling about the anchor point.
//!
//! Points are ranked `1..=n` by angle about the anchor `p1` (the lowest point,
//! ties broken by lowest x). Ranks `3..=n-1` carry a sign: a point is `Minus`
//! when it lies strictly inside the triangle formed by the anchor and its two
//! radial neighbours, `Plus` otherwise. Maximal runs of equal signs form the
//! A-blocks (plus) and B-blocks (minus).
//!
//! Ranks are 1-based throughout this module; `order[r - 1]` is the point
//! index carrying rank `r`.

use std::cell::Cell;
use std::cmp::Ordering;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::geom::PointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// Second-order label: the sign of a point relative to its two nearest
/// same-sign neighbours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Refined {
    /// `++`: plus point outside the triangle of the anchor and its plus neighbours.
    PP,
    /// `+-`: plus point inside that triangle.
    PM,
    /// `-+`: minus point outside the triangle of the anchor and its minus neighbours.
    MP,
    /// `--`: minus point inside that triangle.
    MM,
}

/// A run of consecutive ranks `start..start + len`. Empty runs keep the
/// position they would occupy, so their flanks are still well defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Run {
    pub start: usize,
    pub len: usize,
}

impl Run {
    pub fn ranks(&self) -> Range<usize> {
        self.start..self.start + self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Rank immediately before the run.
    pub fn lower_flank(&self) -> usize {
        self.start - 1
    }

    /// Rank immediately after the run.
    pub fn upper_flank(&self) -> usize {
        self.start + self.len
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialStructure {
    pub anchor: usize,
    /// Point index by rank, `order[0] == anchor`.
    pub order: Vec<usize>,
    /// Rank (1-based) by point index.
    pub rank_of: Vec<usize>,
    /// Sign by rank; `None` outside `3..=n-1`.
    pub signs: Vec<Option<Sign>>,
    /// Refined label by rank; `None` outside `3..=n-1`.
    pub refined: Vec<Option<Refined>>,
    pub blocks_a: Vec<Run>,
    pub blocks_b: Vec<Run>,
    pub k: usize,
}

impl RadialStructure {
    pub fn build(ps: &PointSet) -> Result<Self> {
        let anchor = select_anchor(ps);
        let order = radial_order(ps, anchor)?;
        let n = order.len();
        let mut rank_of = vec![0; n];
        for (r, &i) in order.iter().enumerate() {
            rank_of[i] = r + 1;
        }
        let signs = sign_labels(&order, ps);
        let (blocks_a, blocks_b) = partition_blocks(&signs, n);
        let refined = refine_labels(&order, &signs, ps);
        let k = blocks_a.len();
        Ok(RadialStructure { anchor, order, rank_of, signs, refined, blocks_a, blocks_b, k })
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Point index of rank `r`.
    #[inline]
    pub fn p(&self, r: usize) -> usize {
        self.order[r - 1]
    }

    pub fn sign(&self, r: usize) -> Option<Sign> {
        self.signs.get(r).copied().flatten()
    }

    pub fn refined_label(&self, r: usize) -> Option<Refined> {
        self.refined.get(r).copied().flatten()
    }

    /// Ranks of the plus points, ascending.
    pub fn plus_ranks(&self) -> Vec<usize> {
        (3..self.n()).filter(|&r| self.sign(r) == Some(Sign::Plus)).collect()
    }

    /// True iff odd ranks are minus and even ranks plus over `3..=n-1`.
    pub fn is_pm_set(&self) -> bool {
        self.has_phase(2)
    }

    /// Rank of the first point playing the "plus" role of an alternating
    /// set: 2 for a ± set (rank 3 minus), 3 for the opposite phase (rank 3
    /// plus, rank 4 minus, ...). `None` if the signs do not alternate.
    pub fn alternation_phase(&self) -> Option<usize> {
        [2, 3].into_iter().find(|&ph| self.has_phase(ph))
    }

    fn has_phase(&self, phase: usize) -> bool {
        (3..self.n()).all(|r| {
            let want = if (r - phase).is_multiple_of(2) { Sign::Plus } else { Sign::Minus };
            self.sign(r) == Some(want)
        })
    }

    /// Sum of `|A_i|`.
    pub fn plus_count(&self) -> usize {
        self.blocks_a.iter().map(|b| b.len).sum()
    }
}

/// Index of the lexicographically (y, x)-least point.
pub fn select_anchor(ps: &PointSet) -> usize {
    (0..ps.len()).min_by_key(|&i| (ps.point(i).y, ps.point(i).x)).expect("non-empty point set")
}

/// Point indices sorted by angle about the anchor, anchor first. Comparisons
/// are exact cross products; a zero means two points share a ray.
pub fn radial_order(ps: &PointSet, anchor: usize) -> Result<Vec<usize>> {
    let mut rest: Vec<usize> = (0..ps.len()).filter(|&i| i != anchor).collect();
    let tie: Cell<Option<(usize, usize)>> = Cell::new(None);
    rest.sort_by(|&a, &b| {
        if a == b {
            return Ordering::Equal;
        }
        match ps.orient(anchor, a, b) {
            1 => Ordering::Less,
            -1 => Ordering::Greater,
            _ => {
                tie.set(Some((a, b)));
                a.cmp(&b)
            }
        }
    });
    if let Some((a, b)) = tie.get() {
        let mut t = [anchor, a, b];
        t.sort_unstable();
        return Err(Error::Collinear(t[0], t[1], t[2]));
    }
    for w in rest.windows(2) {
        if ps.orient(anchor, w[0], w[1]) != 1 {
            let mut t = [anchor, w[0], w[1]];
            t.sort_unstable();
            return Err(Error::Collinear(t[0], t[1], t[2]));
        }
    }
    let mut order = Vec::with_capacity(ps.len());
    order.push(anchor);
    order.extend(rest);
    Ok(order)
}

/// Signs by rank for a radial order (`None` outside `3..=n-1`).
pub fn sign_labels(order: &[usize], ps: &PointSet) -> Vec<Option<Sign>> {
    let n = order.len();
    let p = |r: usize| order[r - 1];
    let mut signs = vec![None; n + 1];
    for r in 3..n {
        let minus = ps.in_triangle(p(r), p(1), p(r - 1), p(r + 1));
        signs[r] = Some(if minus { Sign::Minus } else { Sign::Plus });
    }
    signs
}

/// Maximal sign runs over ranks `3..=n-1`: `(A_1..A_k, B_1..B_{k-1})`.
/// `A_1` is empty when rank 3 is minus and `A_k` is empty when rank `n-1` is
/// minus; `B_j` sits between `A_j` and `A_{j+1}`.
pub fn partition_blocks(signs: &[Option<Sign>], n: usize) -> (Vec<Run>, Vec<Run>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut r = 3;
    if n <= 3 || signs[3] == Some(Sign::Minus) {
        a.push(Run { start: 3, len: 0 });
    }
    while r < n {
        let s = signs[r];
        let start = r;
        while r < n && signs[r] == s {
            r += 1;
        }
        let run = Run { start, len: r - start };
        match s {
            Some(Sign::Plus) => a.push(run),
            _ => b.push(run),
        }
    }
    if n > 3 && signs[n - 1] == Some(Sign::Minus) {
        a.push(Run { start: n, len: 0 });
    }
    (a, b)
}

/// Refined labels. The neighbours of a signed point are the nearest points
/// of the same sign on either side; where none exists, rank 2 (below) or rank
/// n (above) stands in.
pub fn refine_labels(order: &[usize], signs: &[Option<Sign>], ps: &PointSet) -> Vec<Option<Refined>> {
    let n = order.len();
    let p = |r: usize| order[r - 1];
    let mut out = vec![None; n + 1];
    for r in 3..n {
        let s = signs[r].expect("signed rank");
        let prev = (3..r).rev().find(|&q| signs[q] == Some(s)).unwrap_or(2);
        let next = (r + 1..n).find(|&q| signs[q] == Some(s)).unwrap_or(n);
        let inside = ps.in_triangle(p(r), p(1), p(prev), p(next));
        out[r] = Some(match (s, inside) {
            (Sign::Plus, true) => Refined::PM,
            (Sign::Plus, false) => Refined::PP,
            (Sign::Minus, true) => Refined::MM,
            (Sign::Minus, false) => Refined::MP,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;

    pub(crate) fn five_point() -> PointSet {
        PointSet::new(vec![Point::new(0, 0), Point::new(4, 0), Point::new(5, 3), Point::new(2, 1), Point::new(0, 4)])
            .unwrap()
    }

    fn ps(v: &[(i64, i64)]) -> PointSet {
        PointSet::new(v.iter().map(|&p| p.into()).collect()).unwrap()
    }

    #[test]
    fn anchor_examples() {
        assert_eq!(select_anchor(&ps(&[(0, 0), (4, 0), (5, 3)])), 0);
        assert_eq!(select_anchor(&ps(&[(1, 5), (3, 1), (0, 1)])), 2);
        assert_eq!(select_anchor(&ps(&[(7, 9), (3, -4), (0, 1)])), 1);
    }

    /// Independent order oracle: sort by slope as an exact rational, using the
    /// quadrant split at the vertical.
    fn slope_sort(ps: &PointSet, anchor: usize) -> Vec<usize> {
        let a = ps.point(anchor);
        let mut rest: Vec<usize> = (0..ps.len()).filter(|&i| i != anchor).collect();
        // key: (half, dy/dx) with half 0 for dx > 0 (angle < 90), 1 otherwise
        rest.sort_by(|&i, &j| {
            let (pi, pj) = (ps.point(i), ps.point(j));
            let (dxi, dyi, dxj, dyj) = (pi.x - a.x, pi.y - a.y, pj.x - a.x, pj.y - a.y);
            let half = |dx: i64| if dx > 0 { 0 } else { 1 };
            match half(dxi).cmp(&half(dxj)) {
                Ordering::Equal => {}
                o => return o,
            }
            if half(dxi) == 0 {
                // increasing dy/dx
                ((dyi as i128) * (dxj as i128)).cmp(&((dyj as i128) * (dxi as i128)))
            } else {
                // dx <= 0: increasing angle means decreasing dx/dy
                ((dxj as i128) * (dyi as i128)).cmp(&((dxi as i128) * (dyj as i128)))
            }
        });
        let mut out = vec![anchor];
        out.extend(rest);
        out
    }

    #[test]
    fn five_point_example() {
        let s = five_point();
        let rs = RadialStructure::build(&s).unwrap();
        // p1=(0,0) p2=(4,0) p3=(2,1) p4=(5,3) p5=(0,4)
        assert_eq!(rs.order, vec![0, 1, 3, 2, 4]);
        assert_eq!(rs.order, slope_sort(&s, 0));
        assert_eq!(rs.sign(3), Some(Sign::Minus));
        assert_eq!(rs.sign(4), Some(Sign::Plus));
        assert_eq!(rs.blocks_a, vec![Run { start: 3, len: 0 }, Run { start: 4, len: 1 }]);
        assert_eq!(rs.blocks_b, vec![Run { start: 3, len: 1 }]);
        assert_eq!(rs.k, 2);
        assert!(rs.is_pm_set());
    }

    #[test]
    fn convex_arc_is_all_plus() {
        // points on a downward parabola above the anchor
        let v: Vec<(i64, i64)> = (0..8).map(|i| (40 - 10 * i, 100 - (i - 3) * (i - 3))).collect();
        let mut all = vec![(0, 0)];
        all.extend(v);
        let s = ps(&all);
        let rs = RadialStructure::build(&s).unwrap();
        assert!((3..rs.n()).all(|r| rs.sign(r) == Some(Sign::Plus)));
        assert_eq!(rs.k, 1);
        assert!(rs.blocks_b.is_empty());
        assert!(!rs.is_pm_set());
    }

    #[test]
    fn circular_arc_keeps_input_order() {
        let pts = [(0, 0), (100, 1), (90, 45), (70, 72), (40, 92), (0, 100), (-40, 92)];
        let s = ps(&pts);
        let rs = RadialStructure::build(&s).unwrap();
        assert_eq!(rs.order, (0..pts.len()).collect::<Vec<_>>());
    }

    #[test]
    fn three_points() {
        let s = ps(&[(5, 5), (0, 0), (3, 1)]);
        let rs = RadialStructure::build(&s).unwrap();
        assert_eq!(rs.order, vec![1, 2, 0]);
        assert!(rs.signs.iter().all(Option::is_none));
        assert_eq!(rs.k, 1);
        assert_eq!(rs.blocks_a, vec![Run { start: 3, len: 0 }]);
        assert!(rs.is_pm_set());
    }

    /// Independent run-length encoder over the sign sequence.
    fn rle(signs: &[Sign]) -> Vec<(Sign, usize)> {
        let mut out: Vec<(Sign, usize)> = Vec::new();
        for &s in signs {
            match out.last_mut() {
                Some((t, c)) if *t == s => *c += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }

    #[test]
    fn partition_matches_run_length_encoding() {
        use Sign::*;
        let cases: Vec<Vec<Sign>> = vec![
            vec![Minus, Plus],
            vec![Plus, Plus, Plus],
            vec![Minus, Plus, Minus, Plus, Minus, Plus],
            vec![Plus, Minus, Minus, Plus, Plus, Minus],
            vec![Minus],
        ];
        for seq in cases {
            let n = seq.len() + 3;
            let mut signs = vec![None; n + 1];
            for (i, &s) in seq.iter().enumerate() {
                signs[i + 3] = Some(s);
            }
            let (a, b) = partition_blocks(&signs, n);
            let runs = rle(&seq);
            let plus: Vec<usize> = runs.iter().filter(|r| r.0 == Plus).map(|r| r.1).collect();
            let minus: Vec<usize> = runs.iter().filter(|r| r.0 == Minus).map(|r| r.1).collect();
            let a_nonempty: Vec<usize> = a.iter().filter(|r| !r.is_empty()).map(|r| r.len).collect();
            assert_eq!(a_nonempty, plus);
            assert_eq!(b.iter().map(|r| r.len).collect::<Vec<_>>(), minus);
            assert_eq!(b.len() + 1, a.len());
            assert_eq!(a[0].is_empty(), seq[0] == Minus);
            assert_eq!(a.last().unwrap().is_empty(), *seq.last().unwrap() == Minus);
            // alternation: A_j precedes B_j precedes A_{j+1}
            for j in 0..b.len() {
                assert_eq!(a[j].upper_flank(), b[j].start);
                assert_eq!(b[j].upper_flank(), a[j + 1].start);
            }
        }
    }

    #[test]
    fn refined_label_examples() {
        // anchor, rank 2, then plus / minus / plus / minus / plus, rank n
        // plus point at rank 5 pulled down below the chord of its plus
        // neighbours (ranks 3 and 7) -> +-
        let s = ps(&[(0, 0), (100, 9), (91, 42), (39, 39), (30, 63), (5, 55), (-26, 97), (-57, 82)]);
        let rs = RadialStructure::build(&s).unwrap();
        let seq: Vec<_> = (3..rs.n()).map(|r| rs.sign(r).unwrap()).collect();
        assert_eq!(seq, vec![Sign::Plus, Sign::Minus, Sign::Plus, Sign::Minus, Sign::Plus]);
        assert_eq!(rs.refined_label(5), Some(Refined::PM));
        assert_eq!(rs.refined_label(3), Some(Refined::PP));
        assert_eq!(rs.refined_label(4), Some(Refined::MP));
        assert_eq!(rs.alternation_phase(), Some(3));
    }
}
