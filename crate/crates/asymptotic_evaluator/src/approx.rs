use coefficient_engine::{build_coefficient_set, CoefficientSet};
use serde::{Deserialize, Serialize};
use transition_map::{CaseTransform, FrameOptions, RecurrenceSystem, TransitionFrame};

use crate::{EvalError, Result};

/// Multiplier applied to the largest observed error ratio when fitting `M̂`.
pub const SAFETY_FACTOR: f64 = 4.0;

/// A reference value for calibration, on the P normalization, given as
/// `value·e^{log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSample {
    pub n: u64,
    pub t: f64,
    pub value: f64,
    pub log_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub m_hat: f64,
    pub samples: Vec<CalibrationSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Approximant {
    pub frame: TransitionFrame,
    pub coeffs: CoefficientSet,
    pub case_transform: CaseTransform,
    pub order_p: usize,
    pub calibration: Option<Calibration>,
}

impl Approximant {
    pub fn new(frame: TransitionFrame, coeffs: CoefficientSet) -> Result<Self> {
        let (fw, cw) = (frame.window(), coeffs.window);
        if (fw.0 - cw.0).abs() > 1e-12 * fw.0.abs() || (fw.1 - cw.1).abs() > 1e-12 * fw.1.abs() {
            return Err(EvalError::WindowMismatch { coeffs: cw, frame: fw });
        }
        Ok(Self {
            case_transform: frame.transform,
            order_p: coeffs.order_p,
            frame,
            coeffs,
            calibration: None,
        })
    }

    /// Frame and coefficient set of order p for a system.
    pub fn build(system: &RecurrenceSystem, opts: FrameOptions, p: usize) -> Result<Self> {
        let frame = TransitionFrame::build(system, opts)?;
        let coeffs = build_coefficient_set(&frame, p)?;
        Self::new(frame, coeffs)
    }

    /// Fits `M̂` as [`SAFETY_FACTOR`] times the largest ratio of observed error
    /// to the budget shape over the samples (at least two).
    pub fn calibrate(&mut self, samples: &[CalibrationSample]) -> Result<f64> {
        if samples.len() < 2 {
            return Err(EvalError::CalibrationTooSmall {
                needed: 2,
                got: samples.len(),
            });
        }
        let mut worst: f64 = 0.0;
        for s in samples {
            let tc = self.case_transform.map_x(s.t);
            let raw = self.canonical(s.n, tc)?;
            let p = self.case_transform.map_value(s.n, raw.p);
            let reference = s.value * (s.log_scale - raw.log_scale).exp();
            let scale = self.big_n(s.n)?.powi(-(self.order_p as i32 + 1)) * raw.shape;
            worst = worst.max((p - reference).abs() / scale);
        }
        let m_hat = SAFETY_FACTOR * worst;
        self.calibration = Some(Calibration {
            m_hat,
            samples: samples.to_vec(),
        });
        Ok(m_hat)
    }
}
