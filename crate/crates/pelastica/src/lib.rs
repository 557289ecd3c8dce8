//! Numerical toolkit for degenerate p-elasticae.
//!
//! The crate builds the classified planar p-elastica curves with
//! vanishing curvature (wavelike, flat-core, alternating, hooked),
//! evaluates their p-bending energies against closed forms expressed in
//! p-elliptic integrals, and probes local minimality of alternating
//! flat-core configurations with a discretized constrained descent.
//!
//! Modules:
//! - [`numerics`]: quadrature and root-finding kernels
//! - [`pelliptic`]: p-elliptic integrals and p-elliptic/p-hyperbolic functions
//! - [`curves`]: curve construction, concatenation, bending energy, Euler-Lagrange residuals
//! - [`hooked`]: the hooked boundary-value class, its classification and minimal energies
//! - [`stability`]: turning-angle discretization and the constrained descent prober

pub mod curves;
pub mod error;
pub mod hooked;
pub mod numerics;
pub mod pelliptic;
pub mod stability;

pub use error::{Error, Result};
pub use pelliptic::{Modulus, PParam};
