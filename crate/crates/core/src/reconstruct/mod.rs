//! Recovering vertex weights from an occupation vector.

mod correlation;
mod descent;
mod gradient;

pub use correlation::expertise_correlation;
pub use descent::{reconstruct_weights, GradientMode, IterRecord, Reconstruction, ReconstructionConfig, Status, StepRule};
pub use gradient::{
    cost, fd_step, finite_difference_gradient, free_vertices, gradcheck, green_derivative, max_relative_error,
    occupation_derivative, occupation_gradient, validate_target, weight_jacobians, DerivativeBundle, GradcheckReport,
    GradientReport,
};
