//! Discrete metric measure spacetimes, Lorentzian optimal transport with
//! `q`-costs, and numerical checks of synthetic timelike curvature bounds.
//!
//! Time separations are [`ExtendedTime`] values: `−∞` marks causally
//! unrelated pairs, finite values are nonnegative, `+∞` is allowed.

pub mod error;
pub mod extended;
pub mod io;
pub mod norms;
pub mod spacetime;
pub mod calculus;
pub mod curvature;
pub mod curves;
pub mod transport;

pub use error::{Error, Result};
pub use extended::{ExtReal, ExtendedTime};
pub use norms::{DualityParams, HyperbolicNorm};
pub use spacetime::DiscreteSpacetime;
