//! Single-qubit well deformations and the six-state entangling gate.

mod calibration;
mod fidelity;
mod single;
mod two_qubit;
mod wells;

pub use calibration::{read_calibrations, write_calibrations, GateCalibration, GateKind};
pub use fidelity::gate_infidelity;
pub use single::{
    calibrate_x_gate, eta_constant, x_gate_duration_closed_form, x_gate_phase, x_rotation, z_gate_beta, z_phase,
    PhaseConvention, WellBase, WellTrajectory, XGateCalibration, ZGateSolution,
};
pub use two_qubit::{
    calibrate_entangling, design_entangling_schedule, entangling_check, extract_logical, ideal_entangling,
    propagate_two_qubit, sample_schedule, tune_closure, two_qubit_closed_form, Closure, EntanglingGate, LogicalGate,
    ScheduleProfile, TwoQubitPropagation, TwoQubitSchedule, CODING, OCCUPATION_BASIS,
};
pub use wells::{coefficients_from_wells, pair_interaction, WellApproach, WellCoefficients, WellPair};
