//! Dynamical invariants of the classical and quantum driven
//! time-dependent harmonic oscillator.
//!
//! The crate solves q'' + omega^2(t) q = F(t) and its Heisenberg-picture
//! analogue, constructs the linear and quadratic invariants from the
//! auxiliary parameters beta, gamma and sigma, and numerically verifies
//! the algebraic relations between them: the product theorem
//! I_L* I_L = I_Q, Wronskian conservation, the first integral of the
//! gamma equation, the Ermakov form, and the symmetric/antisymmetric
//! operator products of the quantum case.

pub mod classical;
pub mod config;
pub mod error;
pub mod expr;
pub mod ode;
pub mod quantum;
pub mod report;
pub mod runner;
pub mod scenario;

pub use error::Error;
