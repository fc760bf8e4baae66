//! Invariant Hermitian geometry engine.
//!
//! Given a left-invariant Hermitian structure — complex structure constants
//! for a (1,0)-coframe plus a Hermitian metric — this crate computes the
//! Chern, Gauduchon, Strominger, and Riemannian connection data, their
//! torsions and curvatures, evaluates the classification predicates
//! (Kaehler, balanced, pluriclosed, Gauduchon, Strominger Kaehler-like,
//! Vaisman, flatness, torsion parallelism), and verifies the identities
//! relating them at desk scale. A residual-minimization search finds
//! Strominger Kaehler-like metrics on a fixed coframe.
//!
//! Modules follow the pipeline order: [`exterior`] (forms and the
//! Maurer-Cartan differential), [`hermitian`] (metric reduction),
//! [`connections`] and [`curvature`], [`calculus`] (covariant derivatives
//! and derived torsion tensors), [`classify`] (predicates and the
//! verification report), [`catalog`] (reference structures and random
//! generators), [`search`] (metric optimization), and [`cli`] (spec files,
//! orchestration, report emission).

// Tensor formulas are written with explicit index loops matching the
// mathematical notation; iterator rewrites would obscure them.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::manual_is_multiple_of)]

pub mod analysis;
pub mod calculus;
pub mod catalog;
pub mod classify;
pub mod cli;
pub mod connections;
pub mod curvature;
pub mod exterior;
pub mod hermitian;
mod linalg;
pub mod search;

pub use analysis::Analysis;
pub use classify::Report;
pub use exterior::{DphiTerm, Form, FrameAlgebra, FrameVector, C};
pub use hermitian::HermitianMetric;

/// Default relative tolerance for predicate booleans and residual checks.
pub const DEFAULT_TOL: f64 = 1e-9;
