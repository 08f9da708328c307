use thiserror::Error;

use crate::fockspace::Space;

/// Every failure the simulator can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Fock cutoff must be at least 1, got {0}")]
    InvalidCutoff(usize),

    #[error("truncation discards {loss:.3e} of the norm at n_max = {n_max} (bound {bound:.1e})")]
    Truncation { loss: f64, bound: f64, n_max: usize },

    #[error("top Fock levels hold {occupancy:.3e} of the population at time index {index}")]
    TruncationDuringEvolution { index: usize, occupancy: f64 },

    #[error("|mu|^2 - |nu|^2 = {0} violates the Bogoliubov condition")]
    InvalidBogoliubov(f64),

    #[error("space mismatch: {0:?} vs {1:?}")]
    SpaceMismatch(Space, Space),

    #[error("wrong vector length {got} for {space:?} (expected {expected})")]
    DimensionMismatch { space: Space, expected: usize, got: usize },

    #[error("unstable resonator: L = {length:e} m is not below 2R = {limit:e} m")]
    UnstableResonator { length: f64, limit: f64 },

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("coupling eta is zero; no storage time")]
    ZeroCoupling,

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("gate charge n_g = {0} but this model requires n_g = 1/2")]
    GateChargeNotTuned(f64),

    #[error("branch frequency is imaginary: omega = {omega}, delta = {delta}")]
    SqueezingUnstable { omega: f64, delta: f64 },

    #[error("overlap denominator vanishes")]
    DegenerateDenominator,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("amplitudes not normalized (|a|^2 + |b|^2 = {0})")]
    NotNormalized(f64),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}

impl Error {
    /// True for failures of numerical validity (truncation, instability)
    /// as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Truncation { .. }
                | Error::TruncationDuringEvolution { .. }
                | Error::InvalidBogoliubov(_)
                | Error::NotHermitian(_)
                | Error::SqueezingUnstable { .. }
                | Error::DegenerateDenominator
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
