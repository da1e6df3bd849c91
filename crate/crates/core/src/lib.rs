//! Integrable time-dependent central potentials.
//!
//! The crate builds the two families of time-dependent central potentials
//! that admit a first integral linear or quadratic in the radial velocity,
//! integrates their equations of motion and checks, numerically, every
//! conservation law, integrability condition and closed-form solution that
//! comes with them.
//!
//! * [`scalarfn`]: expression trees with exact derivatives and quadrature.
//! * [`potentials`]: the linear-integral family, the quadratic-integral
//!   family, named presets and the one-dimensional Lewis–Leach system.
//! * [`integrals`]: evaluators for every first integral.
//! * [`dynamics`]: equations of motion and an adaptive Dormand–Prince
//!   integrator producing sampled trajectories.
//! * [`verify`]: residual checks (direct-method PDEs, generalized Killing
//!   equations, closed forms) collected into JSON reports.
//! * [`quantum`]: Laguerre polynomials and the stationary mode wavefunction.
//! * [`cli`]: the command implementations behind the `tdcentral` binary.

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod integrals;
pub mod potentials;
pub mod quantum;
pub mod scalarfn;
pub mod verify;

pub use error::{Error, Result};
pub use scalarfn::ScalarFn;
