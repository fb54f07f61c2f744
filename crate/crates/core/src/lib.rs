//! Radial p-adic analysis and a solver for the p-adic Nagumo-type equation
//!
//! ```text
//! ∂u/∂t + γ D^α u = -u³ + (β + 1)u² - βu + P(D)(u^m)
//! ```
//!
//! on `Q_p`, restricted to radial data.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod operators;
pub mod padic;
pub mod radial;
pub mod solver;
pub mod sum;
pub mod wavelets;

pub use error::{Error, Result};
pub use operators::{ErrorBound, OperatorRoute, PdTerms, TailPolicy};
pub use padic::{PadicPoint, Prime};
pub use radial::RadialField;
pub use solver::{ExistenceEstimate, Method, ModelParams, SolverConfig, Trajectory};
pub use wavelets::{BlowupWeight, ComparisonParams, WaveletIndex, WeightKind};
