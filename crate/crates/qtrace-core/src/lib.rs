//! Exact-arithmetic toolkit for quantum trace matrices of triangulated
//! punctured bordered surfaces.
//!
//! Given a combinatorial ideal triangulation and an integer `n >= 2`, the
//! crate builds the small-vertex sets of the n-triangulation, the quiver
//! matrix and the trace transition matrices, computes centers and
//! PI-degrees of the associated quantum tori at odd roots of unity via
//! integer lattice normal forms, and mechanically checks the closed-form
//! block identities and counting formulas these objects satisfy.
//!
//! All arithmetic is exact (checked `i128` entries, big-integer group
//! orders); nothing here touches floats.
//!
//! ```
//! use qtrace_core::report::{analyze, AnalyzeOptions};
//!
//! let spec = qtrace_core::surface::builtin("T3").unwrap();
//! let opts = AnalyzeOptions { n: 2, order: 3, ..Default::default() };
//! let report = analyze(&spec, &opts).unwrap();
//! assert_eq!(report.computed_rank.as_deref(), Some("729"));
//! assert_eq!(report.pi_degree.as_deref(), Some("27"));
//! assert!(report.all_checks_pass);
//! ```

pub mod cohomology;
pub mod error;
pub mod lattice;
pub mod ntriang;
pub mod reduced;
pub mod report;
pub mod surface;
pub mod torus;
pub mod trace;
pub mod unity;
pub mod verify;

pub use error::Error;
pub use lattice::{IntMat, Lattice};
pub use surface::{SurfaceSpec, Triangulation};
pub use unity::RootParams;
