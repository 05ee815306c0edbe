//! Numerical kernels for singular cotangent-bundle reduction of the diagonal
//! `SO(5)` action on `S^9 ⊂ R^5 x R^5`.
//!
//! The crate is `no_std` (it needs `alloc` for trajectories). Modules:
//!
//! - [`liealg`]: so(5)/SO(5) kernels, the trace pairing and block projections.
//! - [`bundle`]: the Hopf bundle `S^1 -> S^3 -> S^2(1/2)`, its frame, the
//!   mechanical connection, inertia and curvature.
//! - [`momenta`]: momentum maps of the `SO(5)` and `W0` actions.
//! - [`strata`]: orbit-type classification and the spin quotient.
//! - [`dynamics`]: the unreduced geodesic flow, RATTLE, the reduction map,
//!   the reduced (minimal-coupling) flow and the Lorentz/Wong flows.
//! - [`sample`]: seeded random states on named strata.
//! - [`singular`]: a rank-robust singular value decomposition.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;

pub mod bundle;
pub mod dynamics;
pub mod liealg;
pub mod momenta;
pub mod sample;
pub mod singular;
pub mod strata;

pub use error::{Error, Result};
