//! Operator machinery for finite-dimensional quasi-Hermitian models.
//!
//! Given a non-Hermitian `H` with real, non-degenerate spectrum and a
//! pseudo-metric `P` with `H† = P H P⁻¹`, this crate builds the biorthonormal
//! eigenbasis, its κ-renormalizations, the quasiparity `Q`, the charge `C`
//! and the positive metric `Θ = PQ = CP`, and measures every identity that
//! ties them together.

pub mod biortho;
pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod metric;
pub mod models;
pub mod symmetry;

pub use biortho::{completeness_residual, renormalize, solve_biorthogonal, BiorthogonalSystem};
pub use error::{Error, Result};
pub use linalg::{c64, ComplexMatrix, Tolerance, C64};
pub use metric::{build_bundle, MetricBundle};
pub use models::PseudoMetric;
pub use symmetry::{SymmetryKind, SymmetryVerdict};
