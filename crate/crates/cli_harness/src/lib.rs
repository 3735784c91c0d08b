//! Batch front end over the frame, coefficient, evaluator and oracle crates.
//!
//! Each subcommand reads a [`RunConfig`], prints a short report and writes a
//! CSV table. Exit codes: 0 success, 2 invalid input, 3 numerical or I/O
//! failure, 4 a tolerance or budget check failed.

pub mod commands;
pub mod config;
pub mod metrics;
pub mod model;

pub use commands::{run, run_with, Command, Options, Outcome};
pub use config::{GridVariable, RunConfig, SystemSpec, TGrid, KNOWN_KEYS, P_MAX};

use asymptotic_evaluator::EvalError;
use coefficient_engine::CoeffError;
use recurrence_oracle::OracleError;
use transition_map::FrameError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_ACCEPTANCE: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("declined: {0}")]
    Declined(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Config(_) | HarnessError::Validation(_) | HarnessError::Declined(_) => {
                EXIT_VALIDATION
            }
            HarnessError::Numerical(_) | HarnessError::Io(_) => EXIT_NUMERICAL,
        }
    }

    /// Errors while building a frame or coefficient set: bad inputs are
    /// validation errors, failed integrations are numerical.
    pub(crate) fn from_build(e: EvalError) -> Self {
        match &e {
            EvalError::Frame(FrameError::Quadrature(_))
            | EvalError::Coeff(CoeffError::Numerical(_))
            | EvalError::Coeff(CoeffError::Frame(FrameError::Quadrature(_))) => {
                HarnessError::Numerical(e.to_string())
            }
            _ => HarnessError::Validation(e.to_string()),
        }
    }

    pub(crate) fn from_eval(e: EvalError) -> Self {
        HarnessError::Numerical(e.to_string())
    }
}

impl From<OracleError> for HarnessError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::InvalidConfig(_)
            | OracleError::InvalidWeight(_)
            | OracleError::Domain(_) => HarnessError::Validation(e.to_string()),
            _ => HarnessError::Numerical(e.to_string()),
        }
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Io(std::io::Error::other(e))
    }
}
