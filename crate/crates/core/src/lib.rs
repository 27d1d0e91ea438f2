//! CHSH analysis of a two-qubit scenario in which three measurement
//! outcomes are pinned exactly: one joint outcome never occurs and two
//! conditional outcomes are certain. The remaining joint probability w
//! then witnesses nonlocality directly, S = 2 + 4w.
//!
//! The crate has four layers:
//!
//! * [`quantum`] - states, measurement directions, and the 4x4 operator
//!   oracle every other route is tested against.
//! * [`frame`] - the construction deriving the full measurement frame
//!   from one free direction, with the two focal lengths xi and tau.
//! * [`geometry`] - the ellipse picture: focal chords, the lambda
//!   triangle, and figure-ready point sets.
//! * [`optimize`] / [`checks`] - closed-form optima, constrained numeric
//!   searches, and the named verification suites built on all of it.
//!
//! Every quantity with more than one derivation is computed by every
//! route and the routes are compared in tests and in [`checks`]; none of
//! the duplicates is ever collapsed.

pub mod checks;
pub mod error;
pub mod frame;
pub mod geometry;
pub mod optimize;
pub mod quantum;
pub mod solvers;
pub mod tol;
pub mod vec3;

pub use error::{Error, Result};
pub use quantum::{Concurrence, MeasurementVector};
pub use tol::Tolerances;
pub use vec3::Vec3;
