use crate::{OracleError, Result};

/// One `(n, x)` point: the two basis values and the oracle value, all on a
/// common scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionSample {
    pub n: u64,
    pub p: f64,
    pub q: f64,
    pub target: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionFit {
    pub c1: f64,
    pub c2: f64,
    /// Root-mean-square residual relative to the RMS target.
    pub rel_residual: f64,
}

/// Minimum window length.
pub const MIN_SAMPLES: usize = 4;
const PARALLEL_LIMIT: f64 = 1.0 - 1e-10;

/// Least-squares `target ≈ C₁ p + C₂ q` over the window.
pub fn fit_connection(samples: &[ConnectionSample]) -> Result<ConnectionFit> {
    if samples.len() < MIN_SAMPLES {
        return Err(OracleError::TooFewSamples {
            needed: MIN_SAMPLES,
            got: samples.len(),
        });
    }
    let (mut pp, mut qq, mut pq, mut py, mut qy, mut yy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for s in samples {
        pp += s.p * s.p;
        qq += s.q * s.q;
        pq += s.p * s.q;
        py += s.p * s.target;
        qy += s.q * s.target;
        yy += s.target * s.target;
    }
    let cos = if pp > 0.0 && qq > 0.0 {
        pq / (pp * qq).sqrt()
    } else {
        1.0
    };
    if cos.abs() > PARALLEL_LIMIT {
        return Err(OracleError::IllConditioned(cos.abs()));
    }
    let det = pp * qq - pq * pq;
    let c1 = (py * qq - qy * pq) / det;
    let c2 = (qy * pp - py * pq) / det;
    let rss: f64 = samples
        .iter()
        .map(|s| (s.target - c1 * s.p - c2 * s.q).powi(2))
        .sum();
    Ok(ConnectionFit {
        c1,
        c2,
        rel_residual: (rss / yy.max(f64::MIN_POSITIVE)).sqrt(),
    })
}
