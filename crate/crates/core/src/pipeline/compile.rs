use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::circuit::{GateSpec, LogicalCircuit};
use crate::adiabatic::gevrey_bump;
use crate::error::{invalid, Error, Result};
use crate::field::{mode_decomposition, rabi_frequency, SourceProfile};
use crate::gates::{
    calibrate_x_gate, design_entangling_schedule, z_gate_beta, PhaseConvention, TwoQubitSchedule, WellBase,
    WellTrajectory, XGateCalibration, ZGateSolution,
};
use crate::passage::{scale_for_circuit, PrepParameters, ScalingPrefactors};
use crate::schrodinger::{separation_for_tunneling, tunneling_and_interaction_estimates, Grid};
use crate::spectrum::ChirpSource;
use crate::tolerances::INTER_QUBIT_TUNNELING;

/// Constants in front of the resource scalings; every estimate echoes them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourcePrefactors {
    pub prep_time: f64,
    pub gate_time: f64,
    pub volume: f64,
    pub bits: f64,
    /// λ = lambda / G.
    pub lambda: f64,
}

impl Default for ResourcePrefactors {
    fn default() -> Self {
        Self {
            prep_time: 1.0,
            gate_time: 1.0,
            volume: 1.0,
            bits: 1.0,
            lambda: 1.0,
        }
    }
}

/// Per-qubit double square well: potential depth V (J₂ = −mV inside), well
/// width and the barrier between the two rails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellGeometry {
    pub depth: f64,
    pub width: f64,
    pub gap: f64,
}

impl Default for WellGeometry {
    fn default() -> Self {
        Self {
            depth: 0.2,
            width: 4.0,
            gap: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XGateParams {
    pub g: f64,
    pub beta: f64,
    pub convention: PhaseConvention,
}

impl Default for XGateParams {
    fn default() -> Self {
        Self {
            g: 0.01,
            beta: 50.0,
            convention: PhaseConvention::IncludeIdle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZGateParams {
    pub lambda: f64,
    pub tau: f64,
    pub alpha0: f64,
}

impl Default for ZGateParams {
    fn default() -> Self {
        Self {
            lambda: 2.0,
            tau: 100.0,
            alpha0: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglingParams {
    pub b_amplitude: f64,
    pub duration: f64,
    pub z_min: f64,
    /// Closest approach of the two center wells.
    pub closest: f64,
}

impl Default for EntanglingParams {
    fn default() -> Self {
        Self {
            b_amplitude: 20.0,
            duration: 10.0,
            z_min: 1.0,
            closest: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompileConfig {
    pub mass: f64,
    /// Overrides λ = k/G.
    pub lambda: Option<f64>,
    /// Overrides the per-qubit error ε = min(1/n, G^(−1/4)).
    pub epsilon: Option<f64>,
    pub wells: WellGeometry,
    pub x_gate: XGateParams,
    pub z_gate: ZGateParams,
    pub entangling: EntanglingParams,
    /// Samples per Nyquist interval.
    pub oversampling: f64,
    /// Largest total sample count (J₁ and J₂) a compilation may describe.
    pub sample_cap: u128,
    /// Duration of the smooth J₂ turn-on and turn-off.
    pub ramp: f64,
    pub scaling: ScalingPrefactors,
    pub resources: ResourcePrefactors,
}

impl Default for CompileConfig {
    fn default() -> Self {
        Self {
            mass: 1.0,
            lambda: None,
            epsilon: None,
            wells: WellGeometry::default(),
            x_gate: XGateParams::default(),
            z_gate: ZGateParams::default(),
            entangling: EntanglingParams::default(),
            oversampling: 4.0,
            sample_cap: 1 << 40,
            ramp: 20.0,
            scaling: ScalingPrefactors::default(),
            resources: ResourcePrefactors::default(),
        }
    }
}

impl CompileConfig {
    /// SHA-256 of the JSON encoding, hex.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub n_qubits: usize,
    pub gates: usize,
    pub depth: usize,
    pub lambda: f64,
    /// k·max(n⁸, G²).
    pub prep_time_scale: f64,
    /// k/λ².
    pub gate_time_scale: f64,
    /// k·D/λ².
    pub total_time_scale: f64,
    /// k·n.
    pub volume_scale: f64,
    /// k·n·G²·D.
    pub bit_count_scale: f64,
    pub prefactors: ResourcePrefactors,
    /// Laid-out duration and volume.
    pub total_time: f64,
    pub volume: f64,
    pub time_samples: usize,
    pub space_samples: usize,
    /// J₁ and J₂ samples together.
    pub samples: u128,
    pub bits: u128,
}

/// Scaling part of the estimate, from circuit size alone.
pub fn estimate_resources(n_qubits: usize, gates: usize, depth: usize, k: &ResourcePrefactors) -> Result<ResourceEstimate> {
    if n_qubits == 0 {
        return Err(invalid("circuit needs at least one qubit"));
    }
    let n = n_qubits as f64;
    let g = gates.max(1) as f64;
    let d = depth.max(1) as f64;
    let lambda = k.lambda / g;
    Ok(ResourceEstimate {
        n_qubits,
        gates,
        depth,
        lambda,
        prep_time_scale: k.prep_time * n.powi(8).max(g * g),
        gate_time_scale: k.gate_time / (lambda * lambda),
        total_time_scale: k.gate_time * d / (lambda * lambda),
        volume_scale: k.volume * n,
        bit_count_scale: k.bits * n * g * g * d,
        prefactors: *k,
        total_time: 0.0,
        volume: 0.0,
        time_samples: 0,
        space_samples: 0,
        samples: 0,
        bits: 0,
    })
}

/// A native gate of the lowered circuit, with the logical gate it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NativeGate {
    pub logical: usize,
    pub spec: GateSpec,
}

/// Rewrite swaps over X, Z and entangling gates:
/// CZ = E(π/2, π/2)(S†⊗S†), H = Rz(π/2)Rx(π/2)Rz(π/2) up to phase,
/// CNOT = (I⊗H)CZ(I⊗H) and SWAP as three alternating CNOTs.
pub fn lower_to_native(circuit: &LogicalCircuit) -> Vec<NativeGate> {
    let h = |q: usize| {
        [
            GateSpec::Zrot { qubit: q, theta: PI / 2.0 },
            GateSpec::Xrot { qubit: q, theta: PI / 2.0 },
            GateSpec::Zrot { qubit: q, theta: PI / 2.0 },
        ]
    };
    let cnot = |c: usize, t: usize| {
        let mut v = h(t).to_vec();
        v.push(GateSpec::Entangling { qubits: [c, t], alpha: PI / 2.0, beta: PI / 2.0 });
        v.push(GateSpec::Zrot { qubit: c, theta: -PI / 2.0 });
        v.push(GateSpec::Zrot { qubit: t, theta: -PI / 2.0 });
        v.extend(h(t));
        v
    };
    let mut out = Vec::new();
    for (logical, g) in circuit.gates.iter().enumerate() {
        let native = match *g {
            GateSpec::Swap { qubits: [a, b] } => [cnot(a, b), cnot(b, a), cnot(a, b)].concat(),
            other => vec![other],
        };
        out.extend(native.into_iter().map(|spec| NativeGate { logical, spec }));
    }
    out
}

/// Chosen model for one native gate window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum GateModel {
    /// Rotation by a multiple of 2π: no window needed.
    Identity,
    X { calibration: XGateCalibration, trajectory: WellTrajectory },
    Z { solution: ZGateSolution, trajectory: WellTrajectory },
    Entangling { schedule: TwoQubitSchedule },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowKind {
    RampUp,
    RampDown,
    Prep { source: ChirpSource },
    ReversePrep { source: ChirpSource },
    Gate { native: NativeGate, model: GateModel },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub kind: WindowKind,
    pub qubits: Vec<usize>,
    pub start: f64,
    pub end: f64,
}

/// Uniform space-time lattice, t_k = kΔt and x_i = x_min + iΔx.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub dt: f64,
    pub dx: f64,
    pub time_samples: usize,
    pub space_samples: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub t_total: f64,
}

impl FieldGrid {
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn position(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }
}

/// Spatial layout of the dual-rail wells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub centers: Vec<f64>,
    /// Inner-edge distance between neighbouring qubits.
    pub inter_gap: f64,
    pub inter_tunneling: f64,
    pub omega0: f64,
    pub matrix_element: f64,
    /// Source profile width on the left rail.
    pub source_width: f64,
}

/// Lazily sampled source fields J₁(t, x), J₂(t, x) with their schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompiledFields {
    pub config: CompileConfig,
    pub config_hash: String,
    pub circuit: LogicalCircuit,
    pub native: Vec<NativeGate>,
    pub layout: Layout,
    pub prep: PrepParameters,
    pub epsilon: f64,
    pub grid: FieldGrid,
    pub windows: Vec<Window>,
    pub resources: ResourceEstimate,
}

/// C^∞ step from 0 at s ≤ 0 to 1 at s ≥ 1.
fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / s).exp();
    let b = (-1.0 / (1.0 - s)).exp();
    a / (a + b)
}

fn gate_model(g: &GateSpec, cfg: &CompileConfig) -> Result<GateModel> {
    let wrap = |theta: f64| {
        let r = theta.rem_euclid(TAU);
        if (TAU - r) < 1e-15 {
            0.0
        } else {
            r
        }
    };
    let infeasible = |e: Error| Error::InfeasibleGate(e.to_string());
    match *g {
        GateSpec::Xrot { theta, .. } => {
            // x_rotation(φ) ∝ exp(+iφX/2), so φ = −θ mod 2π
            let phi = wrap(-theta);
            if phi == 0.0 {
                return Ok(GateModel::Identity);
            }
            let p = cfg.x_gate;
            let calibration = calibrate_x_gate(p.g, p.beta, phi, p.convention).map_err(infeasible)?;
            let trajectory = WellTrajectory::new(WellBase::Qes { g: p.g, b0: 1.0 }, p.beta, calibration.tau)?;
            Ok(GateModel::X { calibration, trajectory })
        }
        GateSpec::Zrot { theta, .. } => {
            // z_phase(φ) ∝ exp(−iφZ/2); the solver returns φ = −(requested)
            let phi = wrap(theta);
            if phi == 0.0 {
                return Ok(GateModel::Identity);
            }
            let p = cfg.z_gate;
            let solution = z_gate_beta(-phi, p.lambda, p.tau, p.alpha0).map_err(infeasible)?;
            let trajectory = WellTrajectory::new(WellBase::PoschlTeller { alpha0: p.alpha0, lambda: p.lambda }, solution.beta, p.tau)
                .map_err(infeasible)?;
            Ok(GateModel::Z { solution, trajectory })
        }
        GateSpec::Entangling { alpha, beta, .. } => {
            let p = cfg.entangling;
            let schedule = design_entangling_schedule(alpha, beta, p.b_amplitude, p.duration, p.z_min).map_err(infeasible)?;
            Ok(GateModel::Entangling { schedule })
        }
        GateSpec::Swap { .. } => Err(Error::InfeasibleGate("swap must be lowered before calibration".into())),
    }
}

fn model_duration(m: &GateModel) -> f64 {
    match m {
        GateModel::Identity => 0.0,
        GateModel::X { trajectory, .. } | GateModel::Z { trajectory, .. } => trajectory.duration,
        GateModel::Entangling { schedule } => schedule.total_duration(),
    }
}

fn single_well_mode(cfg: &CompileConfig) -> Result<(f64, f64, f64)> {
    let m = cfg.mass;
    let w = cfg.wells.width;
    let half = 0.5 * w + 40.0 / m;
    let grid = Grid::symmetric(half, 4001)?;
    let j2: Vec<f64> = grid
        .points()
        .iter()
        .map(|x| if x.abs() <= 0.5 * w { -m * cfg.wells.depth } else { 0.0 })
        .collect();
    let basis = mode_decomposition(&j2, m, &grid, 0)?;
    if basis.n_bound == 0 {
        return Err(invalid("well geometry binds no mode"));
    }
    let width = 0.25 * w;
    let h = SourceProfile::gaussian(grid, 0.0, width)?.normalize()?;
    let me = rabi_frequency(1.0, &h, &basis, 0)?;
    Ok((basis.omegas[0], me.abs(), width))
}

/// Lay out wells, sources and gate windows for `circuit`.
pub fn compile(circuit: &LogicalCircuit, cfg: &CompileConfig) -> Result<CompiledFields> {
    circuit.validate()?;
    if !circuit.is_nearest_neighbor() {
        return Err(invalid("circuit has non-adjacent two-qubit gates; apply insert_swaps first"));
    }
    let m = cfg.mass;
    if !(m > 0.0) || !(cfg.oversampling >= 1.0) || !(cfg.ramp > 0.0) {
        return Err(invalid("compile needs m > 0, oversampling ≥ 1 and a positive ramp"));
    }
    let n = circuit.n_qubits;
    let g_count = circuit.gates.len();
    let mut resources = estimate_resources(n, g_count, circuit.depth(), &cfg.resources)?;
    if let Some(l) = cfg.lambda {
        if !(l > 0.0) || l * g_count.max(1) as f64 > cfg.resources.lambda {
            return Err(invalid(format!("λ = {l} exceeds {}/G", cfg.resources.lambda)));
        }
        resources.lambda = l;
        resources.gate_time_scale = cfg.resources.gate_time / (l * l);
        resources.total_time_scale = cfg.resources.gate_time * resources.depth.max(1) as f64 / (l * l);
    }

    let scaled = match cfg.epsilon {
        Some(e) => crate::passage::scale_parameters_with(e, &cfg.scaling)?,
        None => scale_for_circuit(n, g_count, &cfg.scaling)?,
    };
    let epsilon = cfg.epsilon.unwrap_or_else(|| {
        let by_depth = if g_count == 0 { 1.0 } else { (g_count as f64).powf(-0.25) };
        (1.0 / n as f64).min(by_depth)
    });

    // spatial layout
    let (omega0, matrix_element, source_width) = single_well_mode(cfg)?;
    let excess = m - omega0;
    let inter_gap = separation_for_tunneling(excess, m, INTER_QUBIT_TUNNELING)? * (1.0 + 1e-9);
    let inter_tunneling = tunneling_and_interaction_estimates(0.0, inter_gap, -excess, m, resources.lambda)?.tunneling;
    let wg = cfg.wells;
    let pitch = wg.gap + 2.0 * wg.width + inter_gap;
    let centers: Vec<f64> = (0..n).map(|q| q as f64 * pitch).collect();
    let margin = inter_gap;
    let x_min = -(0.5 * wg.gap + wg.width + margin);
    let x_max = centers[n - 1] + 0.5 * wg.gap + wg.width + margin;

    let prep = scaled.prep(omega0, matrix_element);
    let mut source = ChirpSource::new(omega0, prep.bandwidth, prep.duration)?;
    source.amplitude = prep.g;

    // time layout: ramp, prep, gates, reverse prep, ramp
    let native = lower_to_native(circuit);
    let prep_start = cfg.ramp;
    let prep_end = prep_start + prep.duration;
    let mut free = vec![prep_end; n];
    let mut gate_windows = Vec::new();
    for ng in &native {
        let model = gate_model(&ng.spec, cfg)?;
        let q = ng.spec.qubits();
        let start = q.iter().map(|&i| free[i]).fold(prep_end, f64::max);
        let end = start + model_duration(&model);
        q.iter().for_each(|&i| free[i] = end);
        gate_windows.push(Window {
            kind: WindowKind::Gate { native: *ng, model },
            qubits: q,
            start,
            end,
        });
    }
    let gates_end = free.iter().copied().fold(prep_end, f64::max);
    let t_total = gates_end + prep.duration + 2.0 * cfg.ramp;

    let all: Vec<usize> = (0..n).collect();
    let mut windows = vec![
        Window {
            kind: WindowKind::RampUp,
            qubits: all.clone(),
            start: 0.0,
            end: cfg.ramp,
        },
        Window {
            kind: WindowKind::Prep { source },
            qubits: all.clone(),
            start: prep_start,
            end: prep_end,
        },
    ];
    windows.extend(gate_windows);
    windows.push(Window {
        kind: WindowKind::ReversePrep { source },
        qubits: all.clone(),
        start: gates_end,
        end: gates_end + prep.duration,
    });
    windows.push(Window {
        kind: WindowKind::RampDown,
        qubits: all,
        start: t_total - cfg.ramp,
        end: t_total,
    });

    // Nyquist sampling with oversampling
    let omega_max = m.max(omega0 + 0.5 * prep.bandwidth);
    let dt_max = PI / (cfg.oversampling * omega_max);
    let dx_max = PI / (cfg.oversampling * m);
    let time_samples = (t_total / dt_max).ceil() as usize + 1;
    let space_samples = ((x_max - x_min) / dx_max).ceil() as usize + 1;
    let samples = 2 * time_samples as u128 * space_samples as u128;
    if samples > cfg.sample_cap {
        return Err(Error::BudgetExceeded {
            count: samples,
            cap: cfg.sample_cap,
        });
    }
    let grid = FieldGrid {
        dt: t_total / (time_samples - 1) as f64,
        dx: (x_max - x_min) / (space_samples - 1) as f64,
        time_samples,
        space_samples,
        x_min,
        x_max,
        t_total,
    };
    resources.total_time = t_total;
    resources.volume = x_max - x_min;
    resources.time_samples = time_samples;
    resources.space_samples = space_samples;
    resources.samples = samples;
    resources.bits = samples * 64;

    Ok(CompiledFields {
        config: cfg.clone(),
        config_hash: cfg.hash(),
        circuit: circuit.clone(),
        native,
        layout: Layout {
            centers,
            inter_gap,
            inter_tunneling,
            omega0,
            matrix_element,
            source_width,
        },
        prep,
        epsilon,
        grid,
        windows,
        resources,
    })
}

/// Edges (lo, hi) and depth of one rail at some instant.
#[derive(Debug, Clone, Copy)]
struct Rail {
    lo: f64,
    hi: f64,
    depth: f64,
}

impl CompiledFields {
    fn prep_pulse(&self, t: f64) -> f64 {
        let w = &self.windows[1];
        match &w.kind {
            WindowKind::Prep { source } if t >= w.start && t <= w.end => source.sample(t - 0.5 * (w.start + w.end)),
            _ => 0.0,
        }
    }

    fn source_profile(&self, x: f64, q: usize) -> f64 {
        let wg = self.config.wells;
        let c = self.layout.centers[q] - 0.5 * wg.gap - 0.5 * wg.width;
        let s = self.layout.source_width;
        let u = (x - c) / s;
        if u.abs() > 8.0 {
            return 0.0;
        }
        (-0.5 * u * u).exp() / (PI * s * s).powf(0.25)
    }

    /// J₁ at time index k on every spatial sample. The reverse prep is the
    /// prep pulse mirrored about T/2 with opposite sign.
    pub fn j1_row(&self, k: usize) -> Vec<f64> {
        let last = self.grid.time_samples - 1;
        let fwd = self.prep_pulse(self.grid.time(k));
        let rev = self.prep_pulse(self.grid.time(last - k));
        let a = fwd - rev;
        (0..self.grid.space_samples)
            .map(|i| {
                if a == 0.0 {
                    return 0.0;
                }
                let x = self.grid.position(i);
                a * (0..self.circuit.n_qubits).map(|q| self.source_profile(x, q)).sum::<f64>()
            })
            .collect()
    }

    fn rails(&self, t: f64) -> Vec<[Rail; 2]> {
        let wg = self.config.wells;
        let mut rails: Vec<[Rail; 2]> = self
            .layout
            .centers
            .iter()
            .map(|&c| {
                [
                    Rail {
                        lo: c - 0.5 * wg.gap - wg.width,
                        hi: c - 0.5 * wg.gap,
                        depth: wg.depth,
                    },
                    Rail {
                        lo: c + 0.5 * wg.gap,
                        hi: c + 0.5 * wg.gap + wg.width,
                        depth: wg.depth,
                    },
                ]
            })
            .collect();
        for w in &self.windows {
            let WindowKind::Gate { model, .. } = &w.kind else { continue };
            if !(t > w.start && t < w.end) {
                continue;
            }
            let local = t - w.start;
            match model {
                GateModel::Identity => {}
                GateModel::X { trajectory, .. } => {
                    // tunneling grows as the barrier narrows by b₀/b(t)
                    let q = w.qubits[0];
                    let c = self.layout.centers[q];
                    let gap = wg.gap * trajectory.parameter(0.0) / trajectory.parameter(local);
                    rails[q][0] = Rail { lo: c - 0.5 * gap - wg.width, hi: c - 0.5 * gap, depth: wg.depth };
                    rails[q][1] = Rail { lo: c + 0.5 * gap, hi: c + 0.5 * gap + wg.width, depth: wg.depth };
                }
                GateModel::Z { trajectory, .. } => {
                    let q = w.qubits[0];
                    rails[q][1].depth = wg.depth * trajectory.parameter(local) / trajectory.parameter(0.0);
                }
                GateModel::Entangling { schedule } => {
                    let lo = w.qubits[0].min(w.qubits[1]);
                    let hi = lo + 1;
                    let s = local / schedule.total_duration();
                    let bump = gevrey_bump(s);
                    let closest = self.config.entangling.closest.min(self.layout.inter_gap);
                    let ell = if bump == 0.0 {
                        self.layout.inter_gap
                    } else {
                        self.layout.inter_gap.min(closest * gevrey_bump(0.5) / bump)
                    };
                    let shift = 0.5 * (self.layout.inter_gap - ell);
                    rails[lo][1].lo += shift;
                    rails[lo][1].hi += shift;
                    rails[hi][0].lo -= shift;
                    rails[hi][0].hi -= shift;
                }
            }
        }
        rails
    }

    fn ramp(&self, k: usize) -> f64 {
        let last = self.grid.time_samples - 1;
        let r = self.config.ramp;
        smooth_step(self.grid.time(k) / r).min(smooth_step(self.grid.time(last - k) / r))
    }

    /// J₂ at time index k on every spatial sample.
    pub fn j2_row(&self, k: usize) -> Vec<f64> {
        let ramp = self.ramp(k);
        let m = self.config.mass;
        let rails = if ramp == 0.0 { Vec::new() } else { self.rails(self.grid.time(k)) };
        (0..self.grid.space_samples)
            .map(|i| {
                if ramp == 0.0 {
                    return 0.0;
                }
                let x = self.grid.position(i);
                let depth: f64 = rails.iter().flatten().filter(|r| x >= r.lo && x <= r.hi).map(|r| r.depth).sum();
                -m * depth * ramp
            })
            .collect()
    }

    pub fn gate_windows(&self) -> impl Iterator<Item = (&Window, &NativeGate, &GateModel)> {
        self.windows.iter().filter_map(|w| match &w.kind {
            WindowKind::Gate { native, model } => Some((w, native, model)),
            _ => None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::circuit::ideal_unitary;

    #[test]
    fn resource_scaling_example() {
        let r = estimate_resources(4, 10, 5, &ResourcePrefactors::default()).unwrap();
        assert_eq!(r.prep_time_scale, 65536.0);
        assert!((r.lambda * 10.0 - 1.0).abs() < 1e-15);
        assert!((r.gate_time_scale - 100.0).abs() < 1e-9);
        assert_eq!(r.bit_count_scale, 4.0 * 100.0 * 5.0);
    }

    #[test]
    fn swap_lowering_matches_up_to_phase() {
        let c = LogicalCircuit::new(2, vec![GateSpec::Swap { qubits: [0, 1] }]).unwrap();
        let native: Vec<GateSpec> = lower_to_native(&c).into_iter().map(|g| g.spec).collect();
        assert!(native.iter().all(|g| !matches!(g, GateSpec::Swap { .. })));
        let u = ideal_unitary(&c).unwrap();
        let v = ideal_unitary(&LogicalCircuit::new(2, native).unwrap()).unwrap();
        let overlap = (u.adjoint() * &v).trace() / num_complex::Complex64::new(4.0, 0.0);
        assert!((overlap.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn empty_circuit_fields_are_time_antisymmetric() {
        let c = LogicalCircuit::new(1, vec![]).unwrap();
        let cfg = CompileConfig {
            epsilon: Some(0.6),
            ..CompileConfig::default()
        };
        let f = compile(&c, &cfg).unwrap();
        let kinds: Vec<_> = f.windows.iter().map(|w| std::mem::discriminant(&w.kind)).collect();
        assert_eq!(kinds.len(), 4);
        let last = f.grid.time_samples - 1;
        for k in (0..=last).step_by(97) {
            let a = f.j1_row(k);
            let b = f.j1_row(last - k);
            assert!(a.iter().zip(&b).all(|(x, y)| *x == -*y));
            assert_eq!(f.j2_row(k), f.j2_row(last - k));
        }
        assert!(f.j1_row(0).iter().all(|v| *v == 0.0));
        assert!(f.j2_row(0).iter().all(|v| *v == 0.0));
        assert!(f.j2_row(last).iter().all(|v| *v == 0.0));
        assert!(f.layout.inter_tunneling < INTER_QUBIT_TUNNELING);
    }

    #[test]
    fn doubling_mass_quadruples_sample_density() {
        let c = LogicalCircuit::new(2, vec![]).unwrap();
        let cfg = CompileConfig {
            epsilon: Some(0.6),
            ..CompileConfig::default()
        };
        let density = |cfg: &CompileConfig| {
            let f = compile(&c, cfg).unwrap();
            f.resources.samples as f64 / (f.grid.t_total * (f.grid.x_max - f.grid.x_min))
        };
        let d1 = density(&cfg);
        let d2 = density(&CompileConfig { mass: 2.0, ..cfg.clone() });
        assert!((d2 / d1 - 4.0).abs() < 0.05 * 4.0, "{}", d2 / d1);
    }

    #[test]
    fn budget_cap_enforced() {
        let c = LogicalCircuit::new(2, vec![]).unwrap();
        let cfg = CompileConfig {
            sample_cap: 1000,
            ..CompileConfig::default()
        };
        assert!(matches!(compile(&c, &cfg), Err(Error::BudgetExceeded { .. })));
    }
}
