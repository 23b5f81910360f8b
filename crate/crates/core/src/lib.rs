//! Perfect discrimination of rank-one POVMs.
//!
//! The numerical core is generic over the real scalar ([`Scalar`], `f32` or
//! `f64`); the aliases below fix it to the usual choices.

pub mod adaptive;
pub mod classify;
pub mod error;
pub mod experiments;
pub mod fsio;
pub mod json;
pub mod matcore;
pub mod povm;
pub mod rng;
pub mod scalar;
pub mod tol;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use tol::Tolerances;

pub type ComplexMatrix = matcore::CMatrix<f64>;
pub type ComplexVector = matcore::Ket<f64>;
pub type Povm = povm::RankOnePovm<f64>;
pub type Pair = povm::PovmPair<f64>;
pub type PairVerdict = classify::Verdict<f64>;
pub type Scheme = adaptive::AdaptiveScheme<f64>;

pub type ComplexMatrix32 = matcore::CMatrix<f32>;
pub type ComplexVector32 = matcore::Ket<f32>;
pub type Povm32 = povm::RankOnePovm<f32>;
pub type Pair32 = povm::PovmPair<f32>;
pub type Scheme32 = adaptive::AdaptiveScheme<f32>;
