use rug::Float;
use transition_map::ExactCoeffs;

use crate::laguerre::{laguerre_coeffs, ln_k, LaguerreTypeWeight};
use crate::{OracleError, Result};

/// Exact `A_n`, `B_n` of a unit-trailing recurrence.
pub trait CoeffSource {
    /// `(A_n, B_n)` at `bits` of precision.
    fn coeffs(&self, n: u64, bits: u32) -> Result<(Float, Float)>;

    /// Smallest n with coefficients.
    fn min_index(&self) -> u64 {
        0
    }
}

/// Normalised form: `A_n = −(K_n/K_{n+1})/b_n`, `B_n = a_n (K_n/K_{n+1})/b_n`,
/// defined for n ≥ 1.
impl CoeffSource for LaguerreTypeWeight {
    fn coeffs(&self, n: u64, bits: u32) -> Result<(Float, Float)> {
        if n < 1 {
            return Err(OracleError::CoefficientUnavailable { n });
        }
        let c = laguerre_coeffs(self, n, bits);
        let ratio = Float::with_val(bits, ln_k(self, n, bits) - ln_k(self, n + 1, bits)).exp();
        let r_over_b = Float::with_val(bits, &ratio / &c.b);
        let a = -r_over_b.clone();
        let b = Float::with_val(bits, &c.a * &r_over_b);
        Ok((a, b))
    }

    fn min_index(&self) -> u64 {
        1
    }
}

impl CoeffSource for ExactCoeffs {
    fn coeffs(&self, n: u64, bits: u32) -> Result<(Float, Float)> {
        match self {
            ExactCoeffs::Constant { a, b } => {
                Ok((Float::with_val(bits, *a), Float::with_val(bits, *b)))
            }
            ExactCoeffs::Table { a, b } => {
                let i = n as usize;
                match (a.get(i), b.get(i)) {
                    (Some(av), Some(bv)) => {
                        Ok((Float::with_val(bits, *av), Float::with_val(bits, *bv)))
                    }
                    _ => Err(OracleError::CoefficientUnavailable { n }),
                }
            }
            ExactCoeffs::Laguerre { m, alpha, q } => {
                LaguerreTypeWeight::new(*m, *alpha, *q)?.coeffs(n, bits)
            }
        }
    }

    fn min_index(&self) -> u64 {
        match self {
            ExactCoeffs::Laguerre { .. } => 1,
            _ => 0,
        }
    }
}
