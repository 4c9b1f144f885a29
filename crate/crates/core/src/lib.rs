//! Bicomplex Vekua equations for the two-dimensional Dirac equation.
//!
//! The crate builds up in layers:
//!
//! - [`bicomplex`] and [`biquaternion`]: the two algebras, the γ-matrix Dirac
//!   operator at fixed energy and its quaternionic form `R_ω`.
//! - [`pseudoanalytic`]: generating pairs, characteristic coefficients,
//!   `(F,G)`-derivatives and integrals, Vekua residuals and the similarity
//!   principle.
//! - [`formal_powers`]: formal powers `Z⁽ⁿ⁾(a, z₀; z)` of a periodic generating
//!   sequence by cumulative quadrature, Taylor coefficients and series.
//! - [`potential`]: one-variable scalar potentials, their generating sequence
//!   and the associated Schrödinger potentials.
//! - [`dirac_bridge`]: spinor solutions of the Dirac equation assembled from
//!   pairs of Vekua solutions.
//! - [`verify`]: the invariant suite used by the CLI and the acceptance tests.
//!
//! Conventions: `z = x + yk`, `∂̄ = ∂ₓ + k∂_y` and `∂ = ∂ₓ − k∂_y` without a
//! ½ factor, and the `(F,G)`-integral without a ½ prefactor, so that the pair
//! `(1, k)` reproduces classical complex analysis.

pub mod bicomplex;
pub mod biquaternion;
pub mod diff;
pub mod dirac_bridge;
pub mod error;
pub mod field;
pub mod formal_powers;
pub mod geometry;
pub mod potential;
pub mod pseudoanalytic;
pub mod quadrature;
pub mod verify;

pub use bicomplex::{Bicomplex, Projector};
pub use error::{Error, Result};
pub use geometry::{CellGrid, Point2, Point3, Polyline, Rect};
