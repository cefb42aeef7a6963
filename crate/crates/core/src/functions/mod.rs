//! Oracle bundles for the regularizer `h` and the loss `f`.
//!
//! Each bundle exposes the quantities the recursions need (the conjugate
//! gradient of `h`, a subgradient of `f`) plus the four function values
//! `h`, `h*`, `f`, `f*` used for duality gaps.

mod loss;
mod regularizer;

pub use loss::{DualDomain, Loss, DUAL_TOL};
pub use regularizer::{PrimalDomain, Regularizer, DOMAIN_TOL};
