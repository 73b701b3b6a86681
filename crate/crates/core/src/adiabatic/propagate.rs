use std::cell::Cell;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::frame::{gap_floor, generator_in_basis, FrameTrajectory};
use super::hamiltonian::{eigh, CMatrix, TimeDependentHamiltonian};
use crate::error::{invalid, Error, Result};
use crate::numerics::Dopri5;

const MINUS_I: Complex64 = Complex64 { re: 0.0, im: -1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Dynamics generated by M restricted to the lowest d levels.
    Reduced,
    /// Exact Schrödinger equation in the full space.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagateOptions {
    pub trajectory_samples: usize,
    /// Overrides the duration-scaled default tolerance.
    pub rtol: Option<f64>,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        Self {
            trajectory_samples: 2001,
            rtol: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Propagation {
    pub mode: Mode,
    /// ⟨L_j(1)|U|L_k(0)⟩ in the transported eigenframe: d×d (reduced) or n×n (full).
    pub unitary: CMatrix,
    /// Final states U|L_k(0)⟩ in the lab basis, one column per k < d.
    pub lab_states: CMatrix,
    /// max_k ‖(1 − P)U|L_k(0)⟩‖ at s = 1.
    pub leakage: f64,
    /// The same quantity maximized over the trajectory samples.
    pub max_leakage: f64,
    /// Smallest gap above the subspace along the trajectory.
    pub min_gap: f64,
    /// ‖U†U − 1‖ on the propagated columns.
    pub unitarity_error: f64,
}

fn tolerance(system: &TimeDependentHamiltonian, traj: &FrameTrajectory, rtol: Option<f64>) -> f64 {
    rtol.unwrap_or_else(|| {
        let scale = traj.energies.iter().flatten().map(|e| e.abs()).fold(0.0, f64::max);
        (5e-10 / (scale * system.duration() + 1.0)).clamp(1e-13, 1e-10)
    })
}

fn flatten(m: &CMatrix) -> Vec<Complex64> {
    m.iter().copied().collect()
}

fn unflatten(v: &[Complex64], rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_column_slice(rows, cols, v)
}

fn leakage_of(vectors: &CMatrix, d: usize, states: &CMatrix) -> f64 {
    let amps = vectors.adjoint() * states;
    (0..states.ncols())
        .map(|k| (d..amps.nrows()).map(|j| amps[(j, k)].norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

fn unitarity_error(u: &CMatrix) -> f64 {
    let g = u.adjoint() * u;
    (g - CMatrix::identity(u.ncols(), u.ncols())).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn propagate(system: &TimeDependentHamiltonian, d: usize, mode: Mode) -> Result<Propagation> {
    propagate_with(system, d, mode, &PropagateOptions::default())
}

pub fn propagate_with(system: &TimeDependentHamiltonian, d: usize, mode: Mode, opts: &PropagateOptions) -> Result<Propagation> {
    let n = system.dim();
    if d == 0 || d > n {
        return Err(invalid(format!("subspace dimension {d} outside 1..={n}")));
    }
    let traj = FrameTrajectory::build(system, opts.trajectory_samples)?;
    let min_gap = traj.min_gap(d);
    if d < n {
        for (i, e) in traj.energies.iter().enumerate() {
            let mut sorted = e.clone();
            sorted.sort_by(f64::total_cmp);
            let gap = sorted[d] - sorted[d - 1];
            let floor = gap_floor(&sorted);
            if gap < floor {
                return Err(Error::GapClosure { s: traj.s[i], gap, floor });
            }
        }
    }
    let tau = system.duration();
    let ode = Dopri5::new(tolerance(system, &traj, opts.rtol), 1e-14);
    let columns = if mode == Mode::Full { n } else { d };
    let start = traj.vectors[0].columns(0, columns).into_owned();
    let stops: Vec<f64> = traj.s.iter().map(|s| s * tau).collect();
    let mut max_leakage = 0.0f64;
    let mut sample = 0usize;

    let closure: Cell<Option<Error>> = Cell::new(None);
    let rhs = |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let s = t / tau;
        let psi = unflatten(y, n, columns);
        let k = match mode {
            Mode::Full => system.at(s),
            Mode::Reduced => match kato_generator(system, s, d) {
                Ok(k) => k,
                Err(e) => {
                    closure.set(Some(e));
                    system.at(s)
                }
            },
        };
        let out = (k * psi) * MINUS_I;
        dy.copy_from_slice(out.as_slice());
    };
    let (y, _) = ode.integrate_with_stops(rhs, 0.0, tau, &flatten(&start), &stops, |_, y| {
        sample += 1;
        let psi = unflatten(y, n, columns);
        let i = sample.min(traj.len() - 1);
        max_leakage = max_leakage.max(leakage_of(&traj.vectors[i], d, &psi.columns(0, d).into_owned()));
    })?;
    if let Some(e) = closure.take() {
        return Err(e);
    }
    let psi = unflatten(&y, n, columns);
    let end = traj.vectors.last().expect("non-empty");
    let frame = end.adjoint() * &psi;
    let lab_states = psi.columns(0, d).into_owned();
    let leakage = leakage_of(end, d, &lab_states);
    let unitary = match mode {
        Mode::Full => frame,
        Mode::Reduced => frame.view((0, 0), (d, d)).into_owned(),
    };
    Ok(Propagation {
        mode,
        unitarity_error: unitarity_error(&psi),
        unitary,
        lab_states,
        leakage,
        max_leakage,
        min_gap,
    })
}

/// H + i[Ṗ, P] for P the projector on the lowest d levels; it generates the
/// M₋₋ dynamics inside range(P) and is independent of eigenvector phases.
fn kato_generator(system: &TimeDependentHamiltonian, s: f64, d: usize) -> Result<CMatrix> {
    let h = system.at(s);
    let n = h.nrows();
    if d == n {
        return Ok(h);
    }
    let (e, v) = eigh(&h);
    let gap = e[d] - e[d - 1];
    let floor = gap_floor(&e);
    if gap < floor {
        return Err(Error::GapClosure { s, gap, floor });
    }
    let dh = v.adjoint() * system.dt(s) * &v;
    // Ṗ in the eigenbasis: couples j < d with k ≥ d
    let mut pdot = CMatrix::zeros(n, n);
    for j in 0..d {
        for k in d..n {
            let w = dh[(k, j)] / (e[j] - e[k]);
            pdot[(k, j)] = w;
            pdot[(j, k)] = w.conj();
        }
    }
    let mut p = CMatrix::zeros(n, n);
    for j in 0..d {
        p[(j, j)] = Complex64::new(1.0, 0.0);
    }
    let comm = &pdot * &p - &p * &pdot;
    let k = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, e.iter().map(|&x| Complex64::new(x, 0.0)))) + comm * Complex64::new(0.0, 1.0);
    Ok(&v * k * v.adjoint())
}

/// Integrate i da/dt = M₋₋ a directly in the eigenframe, with eigenvectors
/// phase-aligned to the nearest trajectory sample. Returns the d×d frame unitary.
pub fn propagate_frame_generator(system: &TimeDependentHamiltonian, d: usize, traj: &FrameTrajectory, rtol: Option<f64>) -> Result<CMatrix> {
    let n = system.dim();
    if d == 0 || d > n {
        return Err(invalid(format!("subspace dimension {d} outside 1..={n}")));
    }
    let tau = system.duration();
    let ode = Dopri5::new(tolerance(system, traj, rtol), 1e-14);
    let failure: Cell<Option<Error>> = Cell::new(None);
    let y0 = flatten(&CMatrix::identity(d, d));
    let y = ode.integrate(
        |t, y: &[Complex64], dy: &mut [Complex64]| {
            let s = t / tau;
            let (e, v) = traj.aligned_basis(system, s);
            let m = match generator_in_basis(system, s, &e, &v) {
                Ok(m) => m,
                Err(err) => {
                    failure.set(Some(err));
                    CMatrix::zeros(n, n)
                }
            };
            let block = m.view((0, 0), (d, d));
            let out = (block * unflatten(y, d, d)) * MINUS_I;
            dy.copy_from_slice(out.as_slice());
        },
        0.0,
        tau,
        &y0,
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(unflatten(&y, d, d))
}
