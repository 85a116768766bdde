//! The decomposition record shared by every construction and the verifier.

use std::fmt;

use crate::geom::Polygon;

/// Which construction produced a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Baseline,
    Pm,
    Main,
    Oracle,
    External,
}

impl Source {
    pub fn tag(self) -> &'static str {
        match self {
            Source::Baseline => "baseline",
            Source::Pm => "pm",
            Source::Main => "main",
            Source::Oracle => "oracle",
            Source::External => "external",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Source> {
        Some(match tag {
            "baseline" => Source::Baseline,
            "pm" => Source::Pm,
            "main" => Source::Main,
            "oracle" => Source::Oracle,
            "external" => Source::External,
            _ => return None,
        })
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Branch taken by the top-level dispatcher.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    BaselineSmallK,
    PmExact,
    Hybrid,
}

impl Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Branch::BaselineSmallK => "baseline_small_k",
            Branch::PmExact => "pm_exact",
            Branch::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiscrepancyKind {
    /// An A-polygon failed its convexity or emptiness assertion.
    APolygon,
    /// A B-polygon failed its convexity or emptiness assertion.
    BPolygon,
    /// A B-polygon is not even a simple polygon; the whole construction fell
    /// back to a triangulation.
    BPolygonNotSimple,
    /// Realized cell count differs from the closed-form count.
    CountMismatch,
    /// A merge-plan group did not join into a convex polygon.
    PlanGroup,
    /// The case-(b) quadrilateral was not convex.
    CaseBQuad,
    /// A cross-block merge produced a non-convex polygon and was skipped.
    CrossMerge,
    /// The extracted skeleton was not an alternating set.
    Skeleton,
    /// The hybrid branch met an empty A-block it cannot draw from.
    EmptyBlock,
}

/// A claim of the construction that failed at runtime on a concrete input,
/// with the fallback taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub kind: DiscrepancyKind,
    pub detail: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)
    }
}

/// Cardinality bookkeeping recorded by the constructions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Accounting {
    pub n: usize,
    pub c: usize,
    pub k: usize,
    pub a_polygons: usize,
    pub b_polygons: usize,
    pub t_b: usize,
    pub t_u: usize,
    pub blocks: usize,
    pub case_b: usize,
    pub merges_attempted: usize,
    pub merges_applied: usize,
    /// Number of places where a fallback replaced the nominal cells.
    pub fallbacks: usize,
    pub branch: Option<Branch>,
    /// Cell count before the minimalization pass, when one ran.
    pub pre_minimalize: Option<usize>,
    /// Cells of the alternating-skeleton decomposition (hybrid branch).
    pub skeleton_cells: Option<usize>,
    pub interior_inserted: usize,
    pub exterior_inserted: usize,
    /// Cells added by exterior insertions.
    pub exterior_cells_added: usize,
    pub discrepancies: Vec<Discrepancy>,
    /// Modelling assumptions that were exercised on this input.
    pub assumptions: Vec<String>,
}

impl Accounting {
    pub fn discrepancy(&mut self, kind: DiscrepancyKind, detail: impl Into<String>) {
        self.discrepancies.push(Discrepancy { kind, detail: detail.into() });
    }

    pub fn assume(&mut self, note: &str) {
        if !self.assumptions.iter().any(|a| a == note) {
            self.assumptions.push(note.to_string());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub cells: Vec<Polygon>,
    pub source: Source,
    pub accounting: Accounting,
}

impl Decomposition {
    pub fn new(cells: Vec<Polygon>, source: Source) -> Self {
        Decomposition { cells, source, accounting: Accounting::default() }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Sorts cells lexicographically by their canonical vertex cycles.
    pub fn canonicalize(&mut self) {
        self.cells.sort();
    }

    pub fn canonical_cells(&self) -> Vec<Polygon> {
        let mut c = self.cells.clone();
        c.sort();
        c
    }
}
