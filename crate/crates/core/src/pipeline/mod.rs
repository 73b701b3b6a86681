//! Circuit compilation to source-field schedules, gate-model verification and
//! Hadamard-test sampling.
mod circuit;
mod compile;
mod io;
mod sampling;
mod simulate;

pub use circuit::{apply_gate, compose, ideal_unitary, insert_swaps, GateSpec, LogicalCircuit, MAX_QUBITS};
pub use compile::{
    compile, estimate_resources, lower_to_native, CompileConfig, CompiledFields, EntanglingParams, FieldGrid, GateModel,
    Layout, NativeGate, ResourceEstimate, ResourcePrefactors, WellGeometry, Window, WindowKind, XGateParams, ZGateParams,
};
pub use io::{materialize, read_fields, read_header, write_fields, FieldData, FieldFormat, FieldHeader, FORMAT_VERSION};
pub use sampling::{decision, hadamard_test, Decision, DecisionReport, Part, ShotResult};
pub use simulate::{simulate_schedule, ModelLevel, SimulationReport, WindowReport, PREP_SIMULATION_DURATION, VACUUM_RETURN_NOTE};
