//! Finite-difference simulator for a diffuse-interface model of two-phase
//! incompressible flow with a thermo-induced Marangoni effect.
//!
//! The model couples incompressible Navier–Stokes momentum transport, a
//! convective Allen–Cahn equation for the phase field, and an advection–
//! diffusion equation for temperature. Viscosity and thermal conductivity may
//! depend on temperature; the surface-tension coefficient follows a linear
//! Eötvös law, which drives the Marangoni effect through the capillary stress.
//!
//! Spatial discretization is a MAC staggered grid on a rectangle: velocity
//! components live on cell faces, scalars (phase field, temperature, pressure)
//! at cell centers. Time stepping is a splitting scheme: an implicit
//! Allen–Cahn step, an implicit temperature step via the Kirchhoff transform,
//! an explicit momentum predictor, and a pressure projection.
//!
//! Library layout:
//! - [`grid`], [`field`], [`ops`]: staggered grid, fields, discrete operators.
//! - [`coeff`]: temperature-dependent coefficients, double-well potential,
//!   mollification, Kirchhoff transform.
//! - [`solver`]: matrix-free Krylov solvers (CG, Jacobi-PCG, MINRES).
//! - [`dynamics`]: the four sub-steps and the coupled time stepper.
//! - [`diagnostics`]: energy functionals, admissibility thresholds, Sobolev
//!   constant estimation, max-principle and decay monitors.
//! - [`steady`]: steady phase-field states and distance to them.
//! - [`synth`]: synthetic divergence-free velocities and band-limited scalars.
//! - [`config`], [`run`], [`snapshot`], [`error`]: run configuration, the
//!   driver, file formats, and error/exit-status taxonomy.

pub mod coeff;
pub mod config;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod grid;
pub mod ops;
pub mod run;
pub mod snapshot;
pub mod solver;
pub mod steady;
pub mod synth;

#[cfg(test)]
pub(crate) mod testutil;
