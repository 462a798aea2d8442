//! Lorentzian optimal transport on discrete measures.

pub mod interpolation;
pub mod lq;
pub mod measure;
pub mod plan;
pub mod potentials;
pub mod simplex;

pub use interpolation::{dyadic_interpolation, intermediate_error, intermediate_measure, intermediate_point, interpolate_coupling, IntermediateResult};
pub use lq::{coupling_value, lq_distance, lq_distance_with, reverse_triangle_lq, LqOptions, LqResult, LqStatus};
pub use measure::{Coupling, DiscreteMeasure};
pub use plan::{lift_to_plan, DiscretePlan, LiftReport};
pub use potentials::{cyclical_monotonicity_check, duality_gap, CyclicReport, DualityGap, KantorovichPotential};
pub use simplex::{Pricing, TransportProblem};
