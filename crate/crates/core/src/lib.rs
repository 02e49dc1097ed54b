//! Exact computations on finite-dimensional left Leibniz algebras over `Q`
//! and `F_p`: centers, derivation algebras, D-centers and D-derived
//! subalgebras, upper and lower D-central series, and integer-exact checks
//! of the Schur/Hegarty/Baer-type dimension bounds.

pub mod algebra;
pub mod batch;
pub mod bounds;
pub mod derivations;
pub mod field;
pub mod format;
pub mod fuzz;
pub mod invariants;
pub mod linalg;
pub mod report;
pub mod series;

pub use algebra::{catalog, CatalogFamily, Centers, LeibnizAlgebra, StructureConstants};
pub use bounds::{beta, BoundReport, Claim};
pub use derivations::{
    ad_left, adl_set, derivation_algebra, lie_closure, DerivationSet, InducedSet,
};
pub use field::{FieldSpec, Scalar};
pub use format::{
    parse_algebra_file, parse_derivation_file, render_algebra, render_derivations, FormatError,
};
pub use fuzz::{fuzz_generate, FuzzConfig, FuzzStrategy};
pub use linalg::{Matrix, Subspace, Vector};
pub use report::{analyze, render_report, Analysis, ReportFormat};
pub use series::{lower_d_central_series, upper_d_central_series, SeriesFlavor, SeriesResult};
