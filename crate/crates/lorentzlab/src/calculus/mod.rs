//! Causal functions and their slopes, null distances, perturbations, and
//! analytic calculus checks on Minkowski space.

pub mod brenier;
pub mod dalembert;
pub mod functions;
pub mod null_distance;
pub mod smooth;

pub use brenier::{metric_brenier_analytic, metric_brenier_check, BrenierReport};
pub use dalembert::{dalembert_verify, BumpSpec, DalembertOptions, WeakForm, WeakFormReport};
pub use functions::{
    causality_check, distance_extension, duality_formula_check, is_steep, mcshane_extend, slopes, steepness_check, ExtensionMode, SlopeField,
    SLOPE_SCHEDULE,
};
pub use null_distance::{null_distance, null_distances_from, perturbation_membership, PerturbationReport};
pub use smooth::{calculus_rules_check, minkowskianity_defect, modulus, vertical_quotient, SmoothFunction};
