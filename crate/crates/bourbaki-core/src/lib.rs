//! Exact computations with graded modules over polynomial rings, organized
//! around the syzygy module of a homogeneous 2x4 matrix.
//!
//! The pipeline:
//!   * `field`, `monomial`, `poly`, `parse` — exact sparse polynomial arithmetic
//!   * `modgb` — Groebner bases for submodules of graded free modules,
//!     kernels of graded maps, ideal intersection
//!   * `hilbert` — Hilbert series/functions and multiplicity bookkeeping
//!   * `resolution` — minimal graded free resolutions and Betti tables
//!   * `bourbaki` — validation and the invariant pipeline for 2x4 matrices
//!   * `kw` — the catalog of linear pencil normal forms
//!   * `oracle` — brute-force linear-algebra cross-checks
//!   * `selftest` — randomized invariant suites

pub mod field;
pub mod monomial;
pub mod parse;
pub mod poly;

pub mod modgb;

pub mod hilbert;
pub mod oracle;
pub mod resolution;

pub mod bourbaki;
pub mod kw;

pub mod input;
pub mod report;
pub mod selftest;

pub use field::{FieldElement, FieldSpec};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Polynomial;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
