//! Information geometry of the open probability simplex and its Kähler lift.
//!
//! - [`simplex`]: distributions, tangent vectors in the exponential
//!   representation `[u]_p` with `E_p(u) = 0`, and the Fisher metric.
//! - [`curve`]: curves in the simplex and finite-difference velocities.
//! - [`connections`]: the alpha-connections, geodesics and parallel transport.
//! - [`dombrowski`]: the split `(u, v, w)` of `T(TP)` induced by the exponential
//!   connection and the almost-Hermitian triple `(G, J, Omega)`.
//! - [`projective`]: charts and the Fubini-Study structure of `P(C^n)`.
//! - [`covering`]: the covering map `tau: TP -> P(C^n)^×` and its deck group.
//! - [`natgrad`]: natural-gradient descent for a squared loss.
//! - [`verify`]: randomized checks of every invariant and JSON reports.

// Validation uses `!(x <= tol)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod connections;
pub mod covering;
pub mod curve;
pub mod dombrowski;
pub mod error;
pub mod natgrad;
pub mod projective;
pub mod simplex;
pub mod verify;

pub use error::{Error, Result};
