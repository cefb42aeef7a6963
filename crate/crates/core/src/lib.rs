//! Primal-dual first-order methods for `min_x h(x) + f(Ax)`.
//!
//! The crate implements mirror descent and the generalized conditional
//! gradient method on the dual `max_{y∈C} −h*(−Aᵀy) − f*(y)`, checks that
//! the two produce the same primal iterates, and certifies their
//! convergence through duality gaps.
//!
//! - [`linalg`] and [`problem`]: dense operator and validated instances.
//! - [`functions`]: regularizer and loss oracles.
//! - [`algorithms`]: the recursions, step sizes and the run loop.
//! - [`certificates`]: objectives, gaps, geometric constants, bound checks.
//! - [`equivalence`]: lockstep comparison of the two recursions.
//! - [`harness`]: problem generation, reference solutions, CLI plumbing.

pub mod algorithms;
pub mod certificates;
pub mod equivalence;
pub mod error;
pub mod functions;
pub mod harness;
pub mod linalg;
pub mod problem;

pub use error::{Error, Result};
pub use functions::{Loss, Regularizer};
pub use linalg::LinearOperator;
pub use problem::{ProblemInstance, TraceRecord};
