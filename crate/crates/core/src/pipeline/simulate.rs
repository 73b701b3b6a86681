use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::circuit::compose;
use super::compile::{CompiledFields, GateModel, NativeGate};
use crate::adiabatic::{spectral_norm, CMatrix};
use crate::error::Result;
use crate::gates::{extract_logical, gate_infidelity, propagate_two_qubit, x_rotation, z_phase};
use crate::passage::{propagate_sweep, rescaled_sweep, reverse_sweep_fidelity, Frame};

/// Longest prep sweep integrated directly; longer sweeps are time-rescaled.
pub const PREP_SIMULATION_DURATION: f64 = 1e5;

pub const VACUUM_RETURN_NOTE: &str =
    "gate-model proxy: |<0...0|U|0...0>|^2 times per-qubit prep and annihilation fidelities; not a field-theoretic amplitude";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelLevel {
    /// Ideal native gates and perfect preparation.
    Ideal,
    /// Calibrated gate models and simulated two-level sweeps.
    #[default]
    GateModels,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowReport {
    pub native: NativeGate,
    pub infidelity: f64,
    /// min over global phase of ‖U − e^{iφ}V‖₂, bounded above at φ = arg tr(V†U).
    pub operator_error: f64,
    pub leakage: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationReport {
    pub level: ModelLevel,
    #[serde(skip)]
    pub unitary: CMatrix,
    pub windows: Vec<WindowReport>,
    pub prep_fidelity: f64,
    pub reverse_fidelity: f64,
    /// Σ window infidelities + n(1 − F_prep·F_rev).
    pub total_infidelity: f64,
    /// 2Σ operator errors + 1 − (F_prep·F_rev)ⁿ: bounds |vacuum_return − |⟨0|U_ideal|0⟩|²|.
    pub infidelity_budget: f64,
    pub vacuum_return_probability: f64,
    pub note: String,
}

fn operator_error(actual: &CMatrix, ideal: &CMatrix) -> f64 {
    let tr = (ideal.adjoint() * actual).trace();
    let phase = if tr.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { tr / tr.norm() };
    spectral_norm(&(actual - ideal * phase))
}

fn window_model(native: &NativeGate, model: &GateModel) -> Result<(CMatrix, f64)> {
    Ok(match model {
        GateModel::Identity => (CMatrix::identity(1 << native.spec.qubits().len(), 1 << native.spec.qubits().len()), 0.0),
        GateModel::X { calibration, .. } => (x_rotation(calibration.phase), 0.0),
        GateModel::Z { solution, .. } => (z_phase(solution.achieved_phase), 0.0),
        GateModel::Entangling { schedule } => {
            let p = propagate_two_qubit(schedule)?;
            let l = extract_logical(&p.unitary)?;
            (l.unitary, l.leakage)
        }
    })
}

/// Replay every window through its gate model and compose the logical unitary.
pub fn simulate_schedule(compiled: &CompiledFields, level: ModelLevel) -> Result<SimulationReport> {
    let n = compiled.circuit.n_qubits;
    let mut ops = Vec::new();
    let mut windows = Vec::new();
    for (_, native, model) in compiled.gate_windows() {
        let ideal = native.spec.matrix();
        let (actual, leakage) = match level {
            ModelLevel::Ideal => (ideal.clone(), 0.0),
            ModelLevel::GateModels => window_model(native, model)?,
        };
        windows.push(WindowReport {
            native: *native,
            infidelity: gate_infidelity(&actual, &ideal)?,
            operator_error: operator_error(&actual, &ideal),
            leakage,
        });
        ops.push((native.spec.qubits(), actual));
    }
    let unitary = compose(n, &ops)?;
    let (prep_fidelity, reverse_fidelity) = match level {
        ModelLevel::Ideal => (1.0, 1.0),
        ModelLevel::GateModels => {
            let sweep = rescaled_sweep(&compiled.prep, PREP_SIMULATION_DURATION)?;
            (propagate_sweep(&sweep, Frame::Rwa)?.fidelity, reverse_sweep_fidelity(&sweep)?)
        }
    };
    let per_qubit = prep_fidelity * reverse_fidelity;
    let prep_total = per_qubit.powi(n as i32);
    let total_infidelity = windows.iter().map(|w| w.infidelity).sum::<f64>() + n as f64 * (1.0 - per_qubit);
    let infidelity_budget = 2.0 * windows.iter().map(|w| w.operator_error).sum::<f64>() + (1.0 - prep_total);
    let vacuum_return_probability = unitary[(0, 0)].norm_sqr() * prep_total;
    Ok(SimulationReport {
        level,
        unitary,
        windows,
        prep_fidelity,
        reverse_fidelity,
        total_infidelity,
        infidelity_budget,
        vacuum_return_probability,
        note: VACUUM_RETURN_NOTE.into(),
    })
}
