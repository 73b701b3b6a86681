//! Dynamics in the instantaneous eigenbasis and bump-function schedules.

mod bound;
mod frame;
mod gevrey;
mod hamiltonian;
mod propagate;

pub use bound::{leakage_overlap_bound, LeakageBound};
pub use frame::{frame_generator, gap_floor, generator_in_basis, FrameTrajectory};
pub use gevrey::{
    bump_derivative_sups, bump_derivatives, bump_integral, bump_two_level, fit_gevrey, gevrey_bump, leakage_exponent,
    leakage_scan, GevreyFit, LeakagePoint,
};
pub use hamiltonian::{eigh, is_hermitian, spectral_norm, CMatrix, TimeDependentHamiltonian};
pub use propagate::{propagate, propagate_frame_generator, propagate_with, Mode, PropagateOptions, Propagation};
