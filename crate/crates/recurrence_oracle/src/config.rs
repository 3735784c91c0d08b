use rug::Float;

use crate::{OracleError, Result};

pub const MIN_PRECISION_DIGITS: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward-miller",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    /// `(P_start, P_{start+1})`.
    Values(Float, Float),
    /// Miller seeds `P_{n_start+1} = 0, P_{n_start} = 1`; `buffer` overrides
    /// the default `max(50, n_target/2)`.
    Miller { buffer: Option<u64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub precision_digits: u32,
    pub direction: Direction,
    /// Last index of a forward trace.
    pub n_max: u64,
    /// First index held by the trace.
    pub start: u64,
    pub initial: Initial,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            precision_digits: 60,
            direction: Direction::Forward,
            n_max: 2,
            start: 0,
            initial: Initial::Miller { buffer: None },
        }
    }
}

impl OracleConfig {
    pub fn forward(precision_digits: u32, start: u64, n_max: u64, p0: f64, p1: f64) -> Self {
        let bits = bits_for(precision_digits);
        Self {
            precision_digits,
            direction: Direction::Forward,
            n_max,
            start,
            initial: Initial::Values(Float::with_val(bits, p0), Float::with_val(bits, p1)),
        }
    }

    pub fn backward(precision_digits: u32, start: u64) -> Self {
        Self {
            precision_digits,
            direction: Direction::Backward,
            n_max: start + 2,
            start,
            initial: Initial::Miller { buffer: None },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_digits < MIN_PRECISION_DIGITS {
            return Err(OracleError::InvalidConfig(format!(
                "precision_digits must be >= {MIN_PRECISION_DIGITS}, got {}",
                self.precision_digits
            )));
        }
        if self.n_max < 2 {
            return Err(OracleError::InvalidConfig(format!(
                "n_max must be >= 2, got {}",
                self.n_max
            )));
        }
        Ok(())
    }

    /// Binary working precision.
    pub fn bits(&self) -> u32 {
        bits_for(self.precision_digits)
    }
}

pub(crate) fn bits_for(digits: u32) -> u32 {
    (3.33 * digits as f64).ceil() as u32 + 32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_follow_digit_rule() {
        assert_eq!(bits_for(60), 232);
        assert_eq!(bits_for(30), 132);
        assert_eq!(OracleConfig::default().bits(), 232);
    }
}
