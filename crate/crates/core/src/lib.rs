//! Boundary integral solver for time-harmonic electromagnetic scattering of
//! obliquely incident waves by an infinitely long, doubly-connected,
//! penetrable cylinder.
//!
//! The three-dimensional problem reduces to coupled two-dimensional Helmholtz
//! problems for the axial field components on the cross-section: an annulus
//! `Ω₁` bounded by an outer curve `Γ₀` and an inner curve `Γ₁`, with
//! transmission conditions on `Γ₀` and an impedance condition on `Γ₁`.
//! Exterior fields use a Green's representation, interior fields a
//! single-layer ansatz, and the resulting 6×6 block system of integral
//! equations is discretized by a Nyström collocation scheme with
//! logarithmic-singularity quadrature on equispaced nodes.
//!
//! Modules, from the bottom up:
//!
//! * [`specfun`]: Bessel and Hankel functions of orders 0 and 1,
//! * [`geometry`]: boundary curves, node grids and region classification,
//! * [`quadrature`]: trapezoid, log-singular weights, spectral differentiation,
//! * [`operators`]: the discrete boundary integral operator blocks,
//! * [`system`]: scene parameters, block assembly, right-hand sides, solve,
//! * [`fields`]: far fields, near fields, manufactured data, error norms.

pub mod error;
pub mod exec;
pub mod fields;
pub mod geometry;
pub mod operators;
pub mod quadrature;
pub mod specfun;
pub mod system;

pub use error::{Error, Result};
pub use num_complex::Complex64;
