//! Independent numerical checks: direct integration of the coupled δ system,
//! finite-difference application of the reduced fourth-order operator, and
//! end-to-end comparison of fitted analytic solutions with trajectories.

mod compare;
mod fd;
mod ode;

pub use compare::{compare_analytic, initial_phi_jet, Comparison};
pub use fd::{
    fornberg_weights, natural_frequency, operator_residual, reduced_operator, ResidualOptions, ResidualPoint,
    SCALE_FLOOR,
};
pub use ode::{integrate_system, integrate_to_grid, InitialData, IntegratorStats, Trajectory};
