//! Quantum-noise toolkit for an injected triply resonant optical parametric
//! oscillator (OPO) above threshold.
//!
//! The crate evaluates the linearized noise spectra of the pump, sum and
//! difference modes, maps them to output quadrature covariance matrices and
//! spectral purity, computes stationary moments of the Glauber quasi-probability
//! and the windowed photon-counting statistics. Closed-form spectra are checked
//! against an independent matrix-resolvent oracle ([`spectra::oracle_spectrum`]).
//!
//! Frequencies and rates are dimensional (rad per unit time); normalization by
//! the signal damping rate is left to the caller.

// Negated comparisons are how the validators reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod covariance;
mod error;
pub mod glauber;
pub mod model;
pub mod numerics;
pub mod photon_stats;
pub mod presets;
pub mod spectra;

pub use error::{Error, Result};
pub use model::{
    steady_state, validate, InjectionMode, RegimeWarning, SteadyState, Transmission, TropoParams,
};
