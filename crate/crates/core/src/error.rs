use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("angle out of range: theta = {theta}, phi = {phi} (need 0 <= theta <= pi, 0 <= phi < 2pi)")]
    AngleOutOfRange { theta: f64, phi: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid mixture weights a = {a}, b = {b}")]
    InvalidWeights { a: f64, b: f64 },

    #[error("parity undefined: {0}")]
    ParityUndefined(String),

    #[error("invalid cloning machine p = {p}, q = {q} (need q > p >= 1)")]
    InvalidCloneParams { p: u64, q: u64 },

    #[error("insufficient photons: have {have}, need {need}")]
    InsufficientPhotons { have: u64, need: u64 },

    #[error("degenerate direction: Stokes signal vanished (|T| = {norm:e})")]
    DegenerateDirection { norm: f64 },

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
