//! Charged-particle superintegrable systems in static electromagnetic fields.
//!
//! The Hamiltonian is `H = ½(p + A(x))² + V(x)` (unit mass, charge −1), with
//! `B = ∇ × A`. The crate provides:
//!
//! * [`fields`] — constant, helical, monopole and axially symmetric field
//!   models with analytic derivatives and gauge shifts;
//! * [`dynamics`] — Hamilton's equations, adaptive RK45 and Boris integration;
//! * [`integrals`] — first/second-order integrals over the covariant Euclidean
//!   generators, Poisson brackets and determining-equation residuals;
//! * [`closedform`] — helix, nonpolynomial fifth integral, pendulum reduction
//!   and Jacobi `sn`;
//! * [`quantum`] — Landau, Mathieu and radial 1D eigenproblems;
//! * [`algebra`] — bracket tables, Casimirs, monopole closure and Runge–Lenz.
//!
//! Everything here is `no_std` + `alloc`.

#![no_std]
// Float methods come from `num_traits::Float` on toolchains whose `core` lacks
// them; newer `core` (and std under test) resolves them inherently instead.
#![allow(unused_imports)]
// `!(x > 0.0)` is the NaN-rejecting form of every range check here.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod closedform;
pub mod diff;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod integrals;
pub mod quantum;
pub mod sampling;
pub mod vec3;

pub use dynamics::{IntegratorConfig, Method, PhaseState, Trajectory};
pub use error::{Error, Result};
pub use fields::FieldModel;
pub use integrals::{IntegralSpec, PhaseFunction};
pub use vec3::Vec3;
