//! Two-level adiabatic rapid passage.

mod conditions;
mod sweep;
mod two_level;

pub use conditions::{
    check_conditions, check_parameters, prep_time_estimate, rescaled_sweep, scale_for_circuit, scale_parameters,
    scale_parameters_with, Condition, ConditionCheck, ConditionReport, PrepParameters, PrepTime, ScaledParameters,
    ScalingPrefactors,
};
pub use sweep::{
    propagate_sweep, propagate_sweep_traced, reverse_sweep_fidelity, write_trace_csv, Frame, PassageResult, TracePoint,
    TwoLevelSweep,
};
pub use two_level::{effective_hamiltonian, rwa_error_bound, rwa_error_bound_with_diagonal, EffectiveHamiltonian};
