//! Numerics for the Coulomb-gauge quantized photon field in its two
//! equivalent formulations: two polarization vectors per wavevector, or
//! three Cartesian oscillators coupled through `k̂ ∧ a(k)`.
//!
//! Units are ħ = c = 1 throughout; wavevectors and radii are in inverse and
//! direct length units of the same scale.
//!
//! * [`polarization`]: polarization frames, transverse projectors and the
//!   cross-product coupling map.
//! * [`coupling`]: position-space coupling functions and decay fits.
//! * [`fock`]: truncated bosonic Fock space checks.
//! * [`thermo`]: Planck free energy, continuum and finite box.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod error;
pub mod fock;
pub mod polarization;
pub mod quadrature;
pub mod special;
pub mod thermo;

pub use error::{Error, Result};

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;
