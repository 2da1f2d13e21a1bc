//! One-dimensional vacuum (Casimir) energies computed three ways.
//!
//! Every quantity in this crate can be reached by at least two independent
//! routes: a sum over normal modes, a sum over closed classical paths
//! (the method of images), and a closed analytic form. The modules are
//! layered bottom-up:
//!
//! - [`summation`]: regularized summation (Abel, Riesz–Cesàro order 2,
//!   Bernoulli and Mittag-Leffler closed sums, telescoping, lattice tails).
//! - [`spectrum`]: geometries, exact eigenvalues and the counting function.
//! - [`orbits`]: closed-path enumeration, Green-function image sums and
//!   spectral densities split by orbit family.
//! - [`kernels`]: cylinder and heat kernels and their traces.
//! - [`energy`]: regularized and renormalized energies and densities,
//!   cylinder-coefficient fits and the approximation comparison.
//! - [`verify`]: the check suite behind `vacuum verify`.
//!
//! Grid sweeps go through [`par`], which uses rayon when the `parallel`
//! feature is enabled and a plain iterator otherwise.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod energy;
pub mod error;
pub mod kernels;
pub mod orbits;
pub mod par;
pub mod quadrature;
pub mod spectrum;
pub mod summation;
pub mod verify;

pub use error::{Result, VacuumError};
pub use spectrum::{BoundaryCondition, Geometry};
pub use summation::{SeriesControl, SeriesValue, SummationMethod};
