use thiserror::Error;

/// Errors produced by the kernel, the constructions and the file formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point set needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("coordinate of point {index} exceeds the bound of 10^9 in absolute value")]
    CoordinateOutOfRange { index: usize },
    #[error("duplicate points {0} and {1}")]
    DuplicatePoint(usize, usize),
    #[error("general position violated: points {0}, {1}, {2} are collinear")]
    Collinear(usize, usize, usize),
    #[error("point index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
    #[error("no shared edge")]
    NoSharedEdge,
    #[error("polygons share {0} edges")]
    MultipleSharedEdges(usize),
    #[error("polygons have overlapping interiors")]
    OverlappingInteriors,
    #[error("point {point} is not strictly inside the cell")]
    NotInterior { point: usize },
    #[error("not a ± set")]
    NotPmSet,
    #[error("Q-block starting at rank {start} exceeds n = {n}")]
    BlockOutOfRange { start: usize, n: usize },
    #[error("{what}: n = {n} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },
    #[error("generator gave up after {0} attempts")]
    GeneratorExhausted(usize),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("nothing to render")]
    NothingToRender,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
