//! Sector-of-minimal-growth analysis for second order differential
//! operators on metric graphs.
//!
//! A problem consists of a finite collection of intervals (edges), each
//! carrying an operator `a(s) D² + b(s) D + c(s)/(1−s²)` on `[−1, 1]`, an
//! identification of the interval endpoints into vertices, and one coupling
//! condition per vertex given as a pair of square complex matrices `(C | C′)`
//! acting on the boundary coefficients `(α, β)` of functions in the maximal
//! domain. The library decides whether a closed sector `Λ ⊂ ℂ` is a sector
//! of minimal growth — resolvent decay `‖(A−λ)⁻¹‖ = O(1/|λ|)` along `Λ` —
//! through finite-dimensional criteria:
//!
//! * [`graph`] — edges, vertices, endpoint-local data and validation,
//! * [`coupling`] — coupling matrices, admissibility, δ-type conditions,
//! * [`model`] — the frozen-coefficient model operator at a vertex: its
//!   background spectrum, sector decomposition, determinant spectrum test
//!   and spectral design of couplings,
//! * [`kappa`] — the dilation flow on coupling matrices, limiting domains
//!   and the per-vertex certification determinant,
//! * [`analysis`] — the assembled graph-level verdict and report,
//! * [`resolvent`] — a finite-difference laboratory that sweeps resolvent
//!   norms and computes truncated model eigenvalues to cross-check the
//!   certified verdicts numerically.
//!
//! With the default `parallel` feature the λ-sweeps and eigenvalue grid
//! scans run on rayon; without it every entry point computes the same
//! results sequentially.

pub mod analysis;
pub mod coupling;
pub mod error;
pub mod graph;
pub mod kappa;
pub mod model;
pub mod polynomial;
pub mod resolvent;
pub mod sector;

mod linalg;
mod parallel;

pub use error::{Error, Result};
