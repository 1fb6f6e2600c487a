//! Exact single-excitation dynamics of independent qubits in Lorentzian
//! reservoirs under periodic dynamical-decoupling π-pulses, with the
//! resulting quantum speed limit time and BLP non-Markovianity.

pub mod channel;
pub mod cli;
pub mod error;
pub mod kappa;
pub mod multiqubit;
pub mod nonmarkov;
pub mod oracle;
pub mod speedlimit;
pub mod trajectory;

pub use error::{Error, Result};
pub use kappa::{Dynamics, PulseSchedule, Side, SpectralParams};
