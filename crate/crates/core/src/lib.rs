//! Minimal convex decompositions of planar point sets in general position.
//!
//! The crate builds decompositions with three constructions (a radial
//! baseline, a block construction for alternating point sets, and a
//! dispatcher that combines them) and certifies every result with an exact
//! verifier. A brute-force oracle gives ground truth for tiny inputs.
//!
//! ```
//! use convexdecomp::{decompose, io::parse_points, verify};
//!
//! let ps = parse_points("0 0\n4 0\n5 3\n2 1\n0 4\n").unwrap();
//! let d = decompose(&ps).unwrap();
//! assert!(verify(&d, &ps).passed());
//! assert_eq!(d.len(), 3);
//! ```

pub mod error;
pub mod geom;
pub mod radial;
pub mod decomposition;
pub mod baseline;
pub mod verifier;
pub mod pm;
pub mod decomposer;
pub mod generators;
pub mod oracle;
pub mod io;
pub mod svg;

pub use baseline::baseline_decompose;
pub use decomposer::{decompose, minimalize};
pub use decomposition::{Accounting, Branch, Decomposition, Discrepancy, DiscrepancyKind, Source};
pub use error::{Error, Result};
pub use geom::{area2, convex_hull, edge_join, in_triangle_interior, is_convex, orient, Point, PointSet, Polygon};
pub use pm::pm_decompose;
pub use radial::{RadialStructure, Refined, Sign};
pub use verifier::{verify, VerificationReport};
