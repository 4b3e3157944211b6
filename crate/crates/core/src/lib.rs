//! Numerical toolkit for fully nonlinear elliptic equations of eigenvalue
//! type, f(lambda[Hess u + chi]) = psi: the concave operator families built
//! from elementary symmetric functions, their admissibility cones and
//! level-set geometry, sampled structure-condition certificates, covariant
//! calculus on metric box grids, and a damped-Newton / continuation Dirichlet
//! solver with estimate-monitoring diagnostics.
//!
//! Entry points by task:
//!
//! - operator families and derivatives: [`symfun`]
//! - level sets, segment maxima and tangent-cone certificates: [`cone`]
//! - matrix-level operator F(A) = f(lambda(A)) and its derivative: [`matrix`]
//! - structure-condition verifiers and certificates: [`verify`]
//! - metric grids, covariant Hessians, boundary distance: [`grid`]
//! - Dirichlet solver, continuation, barrier diagnostics: [`solver`]
//!
//! The `examples/` directory contains one runnable example per capability;
//! the `hesseq` binary is a thin command-line wrapper over the same calls.

pub mod cone;
pub mod config;
pub mod error;
pub mod fieldio;
pub mod grid;
pub mod jsonfmt;
pub mod krylov;
pub mod linalg;
pub mod matrix;
pub mod sampling;
pub mod solver;
pub mod symfun;
pub mod verify;

pub use error::{Error, Result};
pub use symfun::{ConeKind, ConeSpec, OperatorKind, OperatorSpec, Spectrum};
