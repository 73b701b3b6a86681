use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::calibration::{GateCalibration, GateKind};
use super::fidelity::gate_infidelity;
use crate::adiabatic::{bump_integral, gevrey_bump, CMatrix, TimeDependentHamiltonian};
use crate::error::{invalid, Error, Result};
use crate::numerics::quad;
use crate::schrodinger::{hamiltonian_tridiagonal, qes_solvable, qes_splitting, Grid, PotentialSpec};

/// η = ∫₀¹ exp(−1/(s(1−s))) ds.
pub fn eta_constant() -> f64 {
    bump_integral()
}

/// Baseline well the bump deforms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WellBase {
    /// QES double well; the bump raises b from `b0`.
    Qes { g: f64, b0: f64 },
    /// Pöschl-Teller well; the bump scales α² from `alpha0`².
    PoschlTeller { alpha0: f64, lambda: f64 },
}

/// Smooth excursion of one well parameter, returning to its start at t = τ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellTrajectory {
    pub base: WellBase,
    pub beta: f64,
    pub duration: f64,
}

impl WellTrajectory {
    pub fn new(base: WellBase, beta: f64, duration: f64) -> Result<Self> {
        let t = Self { base, beta, duration };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0 && self.duration.is_finite()) || !self.beta.is_finite() {
            return Err(invalid("trajectory needs finite β and positive duration"));
        }
        match self.base {
            WellBase::Qes { g, b0 } => {
                // b(t) spans [b0, b0 + β·max B] (or the reverse for β < 0)
                let peak = b0 + self.beta * gevrey_bump(0.5);
                for b in [b0, peak] {
                    if !qes_solvable(g, b) {
                        return Err(Error::SolvabilityViolated { b, g });
                    }
                }
            }
            WellBase::PoschlTeller { alpha0, lambda } => {
                if !(alpha0 > 0.0) || !(lambda > 1.0) {
                    return Err(invalid("Pöschl-Teller trajectory needs α₀ > 0 and λ > 1"));
                }
                if !(1.0 + self.beta * gevrey_bump(0.5) > 0.0) {
                    return Err(invalid("bump drives α² through zero"));
                }
            }
        }
        Ok(())
    }

    /// b(t) for QES, α²(t) for Pöschl-Teller.
    pub fn parameter(&self, t: f64) -> f64 {
        let bump = gevrey_bump(t / self.duration);
        match self.base {
            WellBase::Qes { b0, .. } => b0 + self.beta * bump,
            WellBase::PoschlTeller { alpha0, .. } => alpha0 * alpha0 * (1.0 + self.beta * bump),
        }
    }

    /// Same shape run over z times the duration.
    pub fn stretched(&self, z: f64) -> Result<Self> {
        Self::new(self.base, self.beta, self.duration * z)
    }

    /// Finite-difference Hamiltonian of the instantaneous QES well on `grid`
    /// (ħ = 2m = 1), as a schedule over s = t/τ.
    pub fn discretized(&self, grid: Grid) -> Result<TimeDependentHamiltonian> {
        let WellBase::Qes { g, .. } = self.base else {
            return Err(Error::Unsupported("discretized Pöschl-Teller trajectories".into()));
        };
        let traj = *self;
        TimeDependentHamiltonian::real(grid.n_points - 2, self.duration, move |s| {
            let b = traj.parameter(s.clamp(0.0, 1.0) * traj.duration);
            let p = PotentialSpec::qes(g, b).expect("validated trajectory");
            let (diag, off) = hamiltonian_tridiagonal(&p, &grid);
            let n = diag.len();
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = diag[i];
                if i + 1 < n {
                    m[(i, i + 1)] = off[i];
                    m[(i + 1, i)] = off[i];
                }
            }
            m
        })
    }
}

/// Whether the QES idle splitting (b = 1) counts towards the X-gate phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseConvention {
    /// φ = ∫(E₂ − E₁) dt.
    #[default]
    IncludeIdle,
    /// φ = ∫[(E₂ − E₁)(t) − (E₂ − E₁)(0)] dt.
    ExcludeIdle,
}

const PHASE_QUAD_REL: f64 = 1e-13;

/// ∫₀^τ (E₂ − E₁) dt along b(t) = 1 + βB(t/τ), by quadrature of the closed-form splitting.
pub fn x_gate_phase(g: f64, beta: f64, tau: f64, convention: PhaseConvention) -> Result<f64> {
    let traj = WellTrajectory::new(WellBase::Qes { g, b0: 1.0 }, beta, tau)?;
    let idle = match convention {
        PhaseConvention::IncludeIdle => 0.0,
        PhaseConvention::ExcludeIdle => qes_splitting(g, 1.0),
    };
    let integrand = |s: f64| qes_splitting(g, traj.parameter(s * tau)) - idle;
    Ok(tau * quad::integrate(integrand, 0.0, 1.0, 1e-300, PHASE_QUAD_REL).value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XGateCalibration {
    pub g: f64,
    pub beta: f64,
    pub target: f64,
    pub tau: f64,
    pub phase: f64,
    pub residual: f64,
    pub convention: PhaseConvention,
}

impl XGateCalibration {
    /// Dual-rail unitary: relative phase φ between the symmetric and
    /// antisymmetric levels, written in the left/right basis.
    pub fn unitary(&self) -> CMatrix {
        x_rotation(self.phase)
    }

    pub fn record(&self) -> GateCalibration {
        let infidelity = gate_infidelity(&self.unitary(), &x_rotation(self.target)).unwrap_or(1.0);
        GateCalibration {
            gate: GateKind::X,
            parameter: "tau".into(),
            value: self.tau,
            phases: vec![self.phase],
            residual: self.residual,
            infidelity,
        }
    }
}

/// Left/right-basis unitary of a relative level phase φ: e^{−iφ(1−X)/2}.
pub fn x_rotation(phi: f64) -> CMatrix {
    let a = Complex64::from_polar(0.5, 0.0);
    let e = Complex64::from_polar(0.5, -phi);
    CMatrix::from_row_slice(2, 2, &[a + e, a - e, a - e, a + e])
}

/// τ with φ(τ) = target. φ is linear in τ, so one quadrature fixes the rate.
pub fn calibrate_x_gate(g: f64, beta: f64, target: f64, convention: PhaseConvention) -> Result<XGateCalibration> {
    let rate = x_gate_phase(g, beta, 1.0, convention)?;
    if rate == 0.0 {
        return Err(Error::InfeasibleGate("X-gate phase does not accumulate".into()));
    }
    let tau = target / rate;
    if !(tau > 0.0) {
        return Err(Error::InfeasibleGate(format!("target {target} needs negative duration")));
    }
    let phase = x_gate_phase(g, beta, tau, convention)?;
    Ok(XGateCalibration {
        g,
        beta,
        target,
        tau,
        phase,
        residual: (phase - target).abs(),
        convention,
    })
}

/// π(1+g)/(2g(1+2βη)): closed-form duration for φ = π with the idle splitting included.
pub fn x_gate_duration_closed_form(g: f64, beta: f64) -> f64 {
    PI * (1.0 + g) / (2.0 * g * (1.0 + 2.0 * beta * eta_constant()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZGateSolution {
    pub theta: f64,
    pub beta: f64,
    /// ∫₀^τ (E₀(t) − E₀(0)) dt by quadrature; equals θ.
    pub energy_integral: f64,
    /// Phase acquired by the deepened well, −∫(E₀(t) − E₀(0)) dt.
    pub achieved_phase: f64,
}

impl ZGateSolution {
    pub fn unitary(&self) -> CMatrix {
        z_phase(self.achieved_phase)
    }

    pub fn record(&self) -> GateCalibration {
        GateCalibration {
            gate: GateKind::Z,
            parameter: "beta".into(),
            value: self.beta,
            phases: vec![self.achieved_phase],
            residual: (self.energy_integral - self.theta).abs(),
            infidelity: gate_infidelity(&self.unitary(), &z_phase(-self.theta)).unwrap_or(1.0),
        }
    }
}

/// diag(1, e^{iφ}).
pub fn z_phase(phi: f64) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(1.0, phi),
    ]))
}

/// β = −θ/((λ−1)²τα₀²η) for the depth bump α²(t) = α₀²(1 + βB(t/τ)),
/// with the ground energy −α²(λ−1)².
pub fn z_gate_beta(theta: f64, lambda: f64, tau: f64, alpha0: f64) -> Result<ZGateSolution> {
    if !(lambda > 1.0) || !(tau > 0.0) || !(alpha0 > 0.0) {
        return Err(invalid("Z gate needs λ > 1, τ > 0 and α₀ > 0"));
    }
    let l1 = (lambda - 1.0).powi(2);
    let beta = -theta / (l1 * tau * alpha0 * alpha0 * eta_constant());
    let traj = WellTrajectory::new(WellBase::PoschlTeller { alpha0, lambda }, beta, tau)?;
    let e0 = |t: f64| -traj.parameter(t) * l1;
    let start = e0(0.0);
    let energy_integral = tau * quad::integrate(|s| e0(s * tau) - start, 0.0, 1.0, 1e-300, PHASE_QUAD_REL).value;
    Ok(ZGateSolution {
        theta,
        beta,
        energy_integral,
        achieved_phase: -energy_integral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_matches_bump_integral() {
        let eta = eta_constant();
        assert!((eta - 7.0299e-3).abs() < 1e-6);
        let beta = 3.7;
        let scaled = quad::integrate(|s| beta * gevrey_bump(s), 0.0, 1.0, 1e-16, 1e-14).value;
        assert!((scaled - beta * eta).abs() < 1e-14);
    }

    #[test]
    fn z_gate_examples() {
        let z = z_gate_beta(PI, 2.0, 100.0, 1.0).unwrap();
        // frozen from −π/(100η)
        assert!((z.beta + 4.46888).abs() < 1e-4, "{}", z.beta);
        assert!((z.energy_integral - PI).abs() < 1e-6);
        assert!((z.achieved_phase + PI).abs() < 1e-6);
        assert_eq!(z_gate_beta(0.0, 2.0, 100.0, 1.0).unwrap().beta, 0.0);
        assert!(z.record().infidelity < 1e-12);
    }

    #[test]
    fn x_gate_calibration() {
        let c = calibrate_x_gate(0.01, 50.0, PI, PhaseConvention::IncludeIdle).unwrap();
        let closed = x_gate_duration_closed_form(0.01, 50.0);
        assert!(c.residual < 1e-8);
        assert!(((c.tau - closed) / closed).abs() < 1e-6);
        assert!((c.tau - 93.16).abs() < 0.01);
        let idle_free = calibrate_x_gate(0.01, 50.0, PI, PhaseConvention::ExcludeIdle).unwrap();
        let expect = PI * 1.01 / (4.0 * 0.01 * 50.0 * eta_constant());
        assert!(((idle_free.tau - expect) / expect).abs() < 1e-9);
        let flat = calibrate_x_gate(0.01, 0.0, PI, PhaseConvention::IncludeIdle).unwrap();
        assert!((flat.tau - PI * 1.01 / 0.02).abs() < 1e-9);
        assert!(c.record().infidelity < 1e-14);
    }

    #[test]
    fn x_phase_scales_with_duration() {
        let a = x_gate_phase(0.05, 20.0, 10.0, PhaseConvention::IncludeIdle).unwrap();
        let b = x_gate_phase(0.05, 20.0, 30.0, PhaseConvention::IncludeIdle).unwrap();
        assert!((b - 3.0 * a).abs() < 1e-12 * b);
    }

    #[test]
    fn qes_violation_rejected() {
        // b dips below the solvability bound when β is strongly negative
        let r = x_gate_phase(0.01, -30.0, 10.0, PhaseConvention::IncludeIdle);
        assert!(matches!(r, Err(Error::SolvabilityViolated { .. })));
    }

    #[test]
    fn x_rotation_at_pi_is_pauli_x() {
        let u = x_rotation(PI);
        assert!(u[(0, 0)].norm() < 1e-15 && (u[(0, 1)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }
}
