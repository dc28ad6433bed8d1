//! Quantum dynamics of a moving two-level atom coupled to a single cavity mode
//! in a homogeneous gravitational field.
//!
//! The amplitudes of each two-state manifold {|e,n⟩, |g,n+1⟩} are evolved by
//! direct integration ([`dynamics`]) or by the closed-form confluent
//! hypergeometric solution ([`analytic`]). Every observable in
//! [`observables`] is a reduction over a shared [`dynamics::Trajectory`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod csv;
pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod model;
pub mod observables;
mod quadrature;
pub mod scenario;
pub mod special;

pub use error::{Error, Result, SpecialFnError};
pub use quadrature::gauss_hermite;
