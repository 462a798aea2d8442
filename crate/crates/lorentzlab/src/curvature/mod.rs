//! Rényi entropy, distortion coefficients, the timelike measure contraction
//! inequality and geodesics with controlled densities.

pub mod distortion;
pub mod entropy;
pub mod good_geodesic;
pub mod tmcp;

pub use distortion::{sigma, sigma_tilde, sin_kappa, tau, tau_tilde, DistortionParams};
pub use entropy::{mass_excess, renyi_entropy, EntropyValue};
pub use good_geodesic::{good_geodesic, GoodGeodesicOptions, GoodGeodesicReport, LevelReport};
pub use tmcp::{affine_interpolant, default_dimensions, tmcp_check, Direction, TmcpOptions, TmcpReport, TmcpRow};
