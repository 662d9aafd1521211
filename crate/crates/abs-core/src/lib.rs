//! Finite direct projection solvers (ABS methods) and their applications.
//!
//! The engine in [`engine`] runs the scaled rank-one projection iteration
//! generically; [`strategies`] provides the named members (Huang, modified
//! Huang, implicit LU, implicit LX, conjugate-direction,
//! orthogonally-scaled). On top of the same machinery:
//!
//! - [`diophantine`]: exact integer solves with gcd certificates,
//! - [`simplex`]: the standard-form simplex method driven entirely by the
//!   implicit LX projector, with no access to the constraint matrix after
//!   initialization,
//! - [`qn`]: general and structure-constrained solutions of the secant
//!   equation,
//! - [`optimize`]: null-space feasible-direction minimization under linear
//!   equality constraints, with the related Hessian-free unconstrained
//!   iteration.
//!
//! [`generate`] builds reproducible test problems (prescribed condition
//! number, random integer systems, bounded LPs) and [`batch`] maps work
//! across instances, in parallel when the `parallel` feature (default) is
//! enabled.

pub mod batch;
pub mod diophantine;
pub mod engine;
pub mod error;
pub mod generate;
pub mod linalg;
pub mod optimize;
pub mod qn;
pub mod simplex;
pub mod strategies;

pub use error::{Error, Result};
pub use linalg::{RealMatrix, RealVector};
