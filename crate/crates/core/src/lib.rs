//! Closed-form and numerical attractor solvers on Calabi-Yau moduli:
//! exact quadratic-field arithmetic, torus and E x K3 attractors,
//! Weil-Petersson potentials, and independent minimization oracles.

pub mod amodel;
pub mod constellation;
pub mod error;
pub mod even;
pub mod exs;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod mass;
pub mod mat3;
pub mod period;
pub mod scalar;
pub mod torus;
pub mod verify;
pub mod wedge;

pub use error::{Error, NoAttractorReason, Result};
