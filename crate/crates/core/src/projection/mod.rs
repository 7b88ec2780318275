//! Pressure projections on the mixture: the velocity solve that makes the
//! fraction-weighted velocity divergence free, and the density solve that moves
//! fluid particles toward the target fluid fraction.

mod apply;
mod poisson;
mod push_out;
mod solver;
mod target;

pub use apply::{
    apply_density_projection, apply_velocity_projection, density_projection, velocity_projection, weighted_divergence,
};
pub use poisson::{assemble_density_ppe, assemble_operator, assemble_velocity_ppe, PoissonSystem};
pub use push_out::{push_out_rhs, PushOut};
pub use solver::{solve_ppe, SolveStats, SolverParams};
pub use target::{clamp_ratio, compute_target_fraction, target_fraction, ProjectionLimits};
