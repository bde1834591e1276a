// Copyright 2026 The qfridge Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by parameter validation, the solvers and the thermodynamic
/// post-processing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid reduced state: {0}")]
    InvalidState(String),

    #[error("carnot bound undefined: beta1 == beta2")]
    CarnotUndefined,

    #[error("reduced dynamics not closed: excluded coherence leakage {leakage:.3e} (coordinate {coordinate})")]
    ClosureViolation { coordinate: usize, leakage: f64 },

    #[error(
        "kernel dimension {found}, expected {expected}; smallest singular values {spectrum:?}"
    )]
    Degenerate {
        expected: usize,
        found: usize,
        spectrum: Vec<f64>,
    },

    #[error("steady state is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("step size underflow at t = {time:.3e} (spectral gap {spectral_gap:.3e})")]
    Stiff { time: f64, spectral_gap: f64 },

    #[error("coefficient of performance undefined: Q3 = 0")]
    UndefinedCop,

    #[error("second law violated: entropy production {0:.3e}")]
    SecondLawViolation(f64),

    #[error("qubit {qubit} marginal population vanishes; effective temperature is infinite")]
    ZeroMarginal { qubit: usize },

    #[error("empty cooling window")]
    EmptyCoolingWindow,

    #[error("solver: {0}")]
    Solver(String),

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by bad input rather than by a solver.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::InvalidState(_)
                | Error::CarnotUndefined
                | Error::EmptyCoolingWindow
                | Error::Config(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
