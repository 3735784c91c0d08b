//! Canonical form of a recurrence with a transition point at the origin and
//! the ζ machinery that maps it onto Bessel's equation.

pub mod frame;
pub mod system;

pub use frame::{FrameOptions, TransitionFrame, FRAME_VERSION};
pub use system::{
    binom, canonicalize, order_nu, shift_and_recast, transition_points, CaseTransform, ExactCoeffs, Recast,
    RecurrenceSystem,
};

#[derive(Debug, thiserror::Error)]
pub enum FrameError {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("theta = {0} is excluded (0 and 2 are exceptional cases)")]
    ExcludedTheta(f64),
    #[error("alpha_0 must be nonzero")]
    ZeroAlpha0,
    #[error("coefficient series too short: need {needed} terms, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("transition point is not at the origin (beta_0 = {0}, expected +2 or -2)")]
    TransitionNotAtOrigin(f64),
    #[error("beta_1 must vanish, got {0}")]
    NonzeroBeta1(f64),
    #[error("imaginary Bessel order: 1 + 4 beta'_2 = {0} < 0")]
    ImaginaryOrder(f64),
    #[error("theta = {theta} resonates with series term {k}")]
    ResonantTheta { theta: f64, k: usize },
    #[error("bad evaluation window: {0}")]
    BadWindow(String),
    #[error("t = {t} outside the window [{lo}, {hi}]")]
    Domain { t: f64, lo: f64, hi: f64 },
    #[error("{0} is singular at t = 0")]
    Singular(&'static str),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("frame cache: {0}")]
    Cache(String),
}

pub type Frame64 = TransitionFrame;
