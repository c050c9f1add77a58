//! Simulation of quantum-amplification attacks on multiphoton quantum cryptography.
//!
//! Polarization qubits are handled through their Stokes parameters. A cascade of
//! universal cloning machines turns a few photons carrying the same polarization into
//! many noisy clones, whose Stokes measurement reveals the polarization axis. The
//! [`attack`] module runs that against a generic multiphoton source and [`y00`]
//! adapts it to the Y-00 coherent-state protocol.

pub mod attack;
pub mod cli;
pub mod cloning;
pub mod error;
pub mod measurement;
pub mod qubit;
pub mod rng;
pub mod y00;

pub use attack::{run_attack_trial, success_rate, AttackConfig, AttackOutcome, AuxSource, RateEstimate};
pub use cloning::{cascade, CascadeResult, CloneMachine, MixedQubitState};
pub use error::{Error, Result};
pub use measurement::MeasurementMode;
pub use qubit::{aux_info, parity, reconstruct, AuxiliaryInfo, DensityMatrix, Parity, Qubit, StokesVector};
pub use y00::{ciphering_wheel, Y00Params, Y00State};
