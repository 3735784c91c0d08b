//! Numerical building blocks shared by the frame, coefficient and evaluator
//! crates.

pub mod cheb;
pub mod jet;
pub mod quad;

pub use cheb::{ChebBuildError, ChebFun, ChebOptions, ChebPiece};
pub use jet::{Jet, JetScalar};
pub use quad::{integrate, integrate_power_weight, QuadError, QuadOptions, QuadResult};

/// Real-coefficient jet.
pub type Jet64 = Jet<f64>;
/// Complex-coefficient jet.
pub type CJet64 = Jet<num_complex::Complex64>;
