//! One-dimensional bound-state problems.

mod eigen;
mod potential;
mod tunneling;
mod units;
pub mod wronskian;

pub use eigen::{
    boundary_tail, default_grid, exact_energies, hamiltonian_tridiagonal, poschl_teller_ground, qes_energies,
    qes_splitting, solve_bound_states, EigenSolution, Grid,
};
pub use potential::{qes_coefficients, qes_solvable, PotentialKind, PotentialSpec};
pub use tunneling::{
    dressed_propagator, separation_for_tunneling, tunneling_and_interaction_estimates, DressedPropagator,
    TunnelingEstimate,
};
pub use units::UnitsConvention;
pub use wronskian::{green_function, square_barrier_wronskian, wronskian, wronskian_profile};
