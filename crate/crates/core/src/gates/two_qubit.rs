use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::calibration::{GateCalibration, GateKind};
use super::fidelity::gate_infidelity;
use super::single::eta_constant;
use crate::adiabatic::{gevrey_bump, CMatrix};
use crate::error::{invalid, Error, Result};
use crate::numerics::Dopri5;
use crate::tolerances::ENTANGLING;

/// Occupation basis of the coupled well pair, in matrix order.
pub const OCCUPATION_BASIS: [&str; 6] = ["0101", "0110", "1001", "1010", "1100", "0011"];
/// Occupation index of each logical state |00⟩, |01⟩, |10⟩, |11⟩.
pub const CODING: [usize; 4] = [3, 2, 1, 0];

const ENDPOINT_TOL: f64 = 1e-12;

/// Shape of b, c, d over s = t/T.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum ScheduleProfile {
    /// Each coefficient is its amplitude times the Gevrey bump.
    Bump { b: f64, c: f64, d: f64 },
    /// Linear interpolation of samples on an increasing s grid from 0 to 1.
    Sampled {
        s: Vec<f64>,
        b: Vec<f64>,
        c: Vec<f64>,
        d: Vec<f64>,
    },
    /// Square pulse. Used for decoupled-block checks; endpoints do not vanish.
    Constant { b: f64, c: f64, d: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitSchedule {
    pub profile: ScheduleProfile,
    /// Unstretched duration τ.
    pub duration: f64,
    /// Stretch z; the schedule runs over zτ.
    pub stretch: f64,
}

fn interp(s: &[f64], v: &[f64], x: f64) -> f64 {
    if x <= s[0] {
        return v[0];
    }
    let n = s.len();
    if x >= s[n - 1] {
        return v[n - 1];
    }
    let i = s.partition_point(|&p| p <= x) - 1;
    let t = (x - s[i]) / (s[i + 1] - s[i]);
    v[i] + t * (v[i + 1] - v[i])
}

impl TwoQubitSchedule {
    pub fn new(profile: ScheduleProfile, duration: f64) -> Result<Self> {
        let s = Self {
            profile,
            duration,
            stretch: 1.0,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn bump(b: f64, c: f64, d: f64, duration: f64) -> Result<Self> {
        Self::new(ScheduleProfile::Bump { b, c, d }, duration)
    }

    pub fn constant(b: f64, c: f64, d: f64, duration: f64) -> Result<Self> {
        Self::new(ScheduleProfile::Constant { b, c, d }, duration)
    }

    pub fn sampled(s: Vec<f64>, b: Vec<f64>, c: Vec<f64>, d: Vec<f64>, duration: f64) -> Result<Self> {
        Self::new(ScheduleProfile::Sampled { s, b, c, d }, duration)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0 && self.duration.is_finite()) || !(self.stretch > 0.0 && self.stretch.is_finite()) {
            return Err(invalid("schedule needs positive duration and stretch"));
        }
        match &self.profile {
            ScheduleProfile::Bump { b, c, d } | ScheduleProfile::Constant { b, c, d } => {
                if ![b, c, d].iter().all(|v| v.is_finite()) {
                    return Err(invalid("schedule amplitudes must be finite"));
                }
            }
            ScheduleProfile::Sampled { s, b, c, d } => {
                let n = s.len();
                if n < 2 || b.len() != n || c.len() != n || d.len() != n {
                    return Err(invalid("sampled schedule needs matching s, b, c, d (≥ 2 rows)"));
                }
                if s[0] != 0.0 || s[n - 1] != 1.0 || s.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(invalid("sampled schedule s must increase from 0 to 1"));
                }
                for v in [b, c, d] {
                    if v.iter().any(|x| !x.is_finite()) {
                        return Err(invalid("schedule samples must be finite"));
                    }
                    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                    if v[0].abs() > ENDPOINT_TOL * peak.max(1.0) || v[n - 1].abs() > ENDPOINT_TOL * peak.max(1.0) {
                        return Err(invalid("b, c, d must vanish at both endpoints"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn with_stretch(&self, z: f64) -> Result<Self> {
        let s = Self {
            stretch: z,
            ..self.clone()
        };
        s.validate()?;
        Ok(s)
    }

    /// zτ.
    pub fn total_duration(&self) -> f64 {
        self.duration * self.stretch
    }

    /// (b, c, d) at s = t/(zτ).
    pub fn at_s(&self, s: f64) -> [f64; 3] {
        match &self.profile {
            ScheduleProfile::Bump { b, c, d } => {
                let w = gevrey_bump(s);
                [b * w, c * w, d * w]
            }
            ScheduleProfile::Constant { b, c, d } => [*b, *c, *d],
            ScheduleProfile::Sampled { s: grid, b, c, d } => [interp(grid, b, s), interp(grid, c, s), interp(grid, d, s)],
        }
    }

    pub fn at(&self, t: f64) -> [f64; 3] {
        self.at_s(t / self.total_duration())
    }

    /// (∫b, ∫c, ∫d) dt over the stretched schedule.
    pub fn integrals(&self) -> [f64; 3] {
        let t = self.total_duration();
        match &self.profile {
            ScheduleProfile::Bump { b, c, d } => {
                let eta = eta_constant();
                [b * eta * t, c * eta * t, d * eta * t]
            }
            ScheduleProfile::Constant { b, c, d } => [b * t, c * t, d * t],
            ScheduleProfile::Sampled { s, b, c, d } => {
                // exact for the linear interpolant
                let int = |v: &[f64]| -> f64 { s.windows(2).zip(v.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum() };
                [int(b) * t, int(c) * t, int(d) * t]
            }
        }
    }

    /// θx = ∫b dt.
    pub fn theta_x(&self) -> f64 {
        self.integrals()[0]
    }

    /// Physical times where the interpolant has kinks.
    pub fn knots(&self) -> Vec<f64> {
        match &self.profile {
            ScheduleProfile::Sampled { s, .. } => s[1..].iter().map(|x| x * self.total_duration()).collect(),
            _ => Vec::new(),
        }
    }

    /// H_A(t) in [`OCCUPATION_BASIS`] order.
    pub fn hamiltonian(&self, t: f64) -> DMatrix<f64> {
        let [b, c, d] = self.at(t);
        let mut h = DMatrix::zeros(6, 6);
        h[(0, 5)] = b;
        h[(5, 0)] = b;
        h[(3, 4)] = b;
        h[(4, 3)] = b;
        h[(1, 1)] = c;
        h[(2, 2)] = d;
        h
    }

    /// Peak |b|, |c|, |d| over a uniform s grid.
    pub fn peaks(&self, samples: usize) -> [f64; 3] {
        let mut p = [0.0f64; 3];
        for i in 0..=samples {
            let v = self.at_s(i as f64 / samples as f64);
            for k in 0..3 {
                p[k] = p[k].max(v[k].abs());
            }
        }
        p
    }
}

#[derive(Debug, Clone)]
pub struct TwoQubitPropagation {
    /// 6×6 propagator in [`OCCUPATION_BASIS`] order.
    pub unitary: CMatrix,
    pub theta_x: f64,
    /// −∫c dt, accumulated continuously.
    pub alpha: f64,
    /// −∫d dt, accumulated continuously.
    pub beta: f64,
    pub unitarity_error: f64,
}

/// 𝒯exp(−i∫H_A dt) by adaptive Runge-Kutta on the full 6×6 matrix.
pub fn propagate_two_qubit(schedule: &TwoQubitSchedule) -> Result<TwoQubitPropagation> {
    schedule.validate()?;
    let total = schedule.total_duration();
    let peaks = schedule.peaks(400);
    let scale = peaks.iter().fold(0.0f64, |m, v| m.max(*v));
    let rtol = (5e-11 / (scale * total + 1.0)).clamp(1e-13, 1e-11);
    let ode = Dopri5::new(rtol, 1e-15);
    let y0: Vec<Complex64> = CMatrix::identity(6, 6).iter().copied().collect();
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let h = schedule.hamiltonian(t);
        // column-major 6×6
        for col in 0..6 {
            for row in 0..6 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..6 {
                    let hv = h[(row, k)];
                    if hv != 0.0 {
                        acc += y[col * 6 + k] * hv;
                    }
                }
                dy[col * 6 + row] = acc * minus_i;
            }
        }
    };
    let mut stops = schedule.knots();
    stops.retain(|t| *t > 0.0 && *t < total);
    stops.push(total);
    let (y, _) = ode.integrate_with_stops(rhs, 0.0, total, &y0, &stops, |_, _| {})?;
    let u = CMatrix::from_column_slice(6, 6, &y);
    let [theta_x, ic, id] = schedule.integrals();
    Ok(TwoQubitPropagation {
        unitarity_error: unitarity_error(&u),
        unitary: u,
        theta_x,
        alpha: -ic,
        beta: -id,
    })
}

fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.ncols();
    (u.adjoint() * u - CMatrix::identity(n, n)).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Closed form of the same propagator: H_A(t) is block diagonal with
/// commuting blocks, so U is fixed by ∫b, ∫c, ∫d.
pub fn two_qubit_closed_form(schedule: &TwoQubitSchedule) -> CMatrix {
    let [th, ic, id] = schedule.integrals();
    let mut u = CMatrix::zeros(6, 6);
    let (s, c) = th.sin_cos();
    let cs = Complex64::new(c, 0.0);
    let sn = Complex64::new(0.0, -s);
    for (p, q) in [(0usize, 5usize), (3, 4)] {
        u[(p, p)] = cs;
        u[(q, q)] = cs;
        u[(p, q)] = sn;
        u[(q, p)] = sn;
    }
    u[(1, 1)] = Complex64::from_polar(1.0, -ic);
    u[(2, 2)] = Complex64::from_polar(1.0, -id);
    u
}

#[derive(Debug, Clone)]
pub struct LogicalGate {
    /// 4×4 in computational order |00⟩, |01⟩, |10⟩, |11⟩.
    pub unitary: CMatrix,
    /// Largest norm of a coding column's amplitude outside the coding subspace.
    pub leakage: f64,
    /// arg of the |10⟩ (0110) diagonal entry, in (−π, π].
    pub alpha: f64,
    /// arg of the |01⟩ (1001) diagonal entry, in (−π, π].
    pub beta: f64,
}

pub fn extract_logical(u6: &CMatrix) -> Result<LogicalGate> {
    if u6.nrows() != 6 || u6.ncols() != 6 {
        return Err(Error::DimensionMismatch(u6.nrows(), 6));
    }
    let mut u = CMatrix::zeros(4, 4);
    for (i, &p) in CODING.iter().enumerate() {
        for (j, &q) in CODING.iter().enumerate() {
            u[(i, j)] = u6[(p, q)];
        }
    }
    let leakage = CODING
        .iter()
        .map(|&q| (u6[(4, q)].norm_sqr() + u6[(5, q)].norm_sqr()).sqrt())
        .fold(0.0, f64::max);
    Ok(LogicalGate {
        alpha: u6[(1, 1)].arg(),
        beta: u6[(2, 2)].arg(),
        unitary: u,
        leakage,
    })
}

/// diag(1, e^{iβ}, e^{iα}, 1) in computational order.
pub fn ideal_entangling(alpha: f64, beta: f64) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_vec(vec![
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(1.0, beta),
        Complex64::from_polar(1.0, alpha),
        Complex64::new(1.0, 0.0),
    ]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Closure {
    pub z: f64,
    /// θx(z) = 2πk.
    pub k: u64,
    pub theta_x: f64,
}

/// Smallest stretch z ≥ z_min with θx(z)/2π a positive integer; θx is linear in z.
pub fn tune_closure(schedule: &TwoQubitSchedule, z_min: f64) -> Result<Closure> {
    if !(z_min > 0.0 && z_min.is_finite()) {
        return Err(invalid("adiabaticity floor z_min must be positive"));
    }
    let base = schedule.with_stretch(1.0)?;
    let theta1 = base.theta_x();
    let abs_scale = base.peaks(400)[0] * base.duration;
    if !theta1.is_finite() || theta1.abs() <= 1e-14 * abs_scale || theta1 == 0.0 {
        return Err(Error::NoClosure);
    }
    let turns = z_min * theta1.abs() / (2.0 * PI);
    // tolerate rounding just above an integer
    let mut k = turns.ceil();
    if k - turns > 1.0 - 1e-12 {
        k -= 1.0;
    }
    let k = k.max(1.0);
    let z = 2.0 * PI * k / theta1.abs();
    Ok(Closure {
        z,
        k: k as u64,
        theta_x: theta1 * z,
    })
}

/// True iff |e^{i(α+β)} − 1| exceeds the entangling threshold.
pub fn entangling_check(alpha: f64, beta: f64) -> bool {
    (Complex64::from_polar(1.0, alpha + beta) - Complex64::new(1.0, 0.0)).norm() > ENTANGLING
}

#[derive(Debug, Clone)]
pub struct EntanglingGate {
    pub schedule: TwoQubitSchedule,
    pub closure: Closure,
    pub propagation: TwoQubitPropagation,
    pub logical: LogicalGate,
    pub infidelity: f64,
}

impl EntanglingGate {
    pub fn record(&self) -> GateCalibration {
        GateCalibration {
            gate: GateKind::Entangling,
            parameter: "z".into(),
            value: self.closure.z,
            phases: vec![self.propagation.alpha, self.propagation.beta],
            residual: (self.closure.theta_x - 2.0 * PI * self.closure.k as f64).abs(),
            infidelity: self.infidelity,
        }
    }
}

/// Tune the closure of `schedule`, propagate, and compare against the ideal
/// diagonal gate with the accumulated phases.
pub fn calibrate_entangling(schedule: &TwoQubitSchedule, z_min: f64) -> Result<EntanglingGate> {
    let closure = tune_closure(schedule, z_min)?;
    let tuned = schedule.with_stretch(closure.z)?;
    let propagation = propagate_two_qubit(&tuned)?;
    let logical = extract_logical(&propagation.unitary)?;
    let infidelity = gate_infidelity(&logical.unitary, &ideal_entangling(propagation.alpha, propagation.beta))?;
    Ok(EntanglingGate {
        schedule: tuned,
        closure,
        propagation,
        logical,
        infidelity,
    })
}

/// Bump schedule realizing diag(1, e^{iβ}, e^{iα}, 1): b is closed first,
/// then the c and d amplitudes are set from the stretched duration.
pub fn design_entangling_schedule(alpha: f64, beta: f64, b_amplitude: f64, duration: f64, z_min: f64) -> Result<TwoQubitSchedule> {
    let probe = TwoQubitSchedule::bump(b_amplitude, 0.0, 0.0, duration)?;
    let closure = tune_closure(&probe, z_min)?;
    let total = duration * closure.z;
    let eta = eta_constant();
    let sched = TwoQubitSchedule::bump(b_amplitude, -alpha / (total * eta), -beta / (total * eta), duration)?;
    sched.with_stretch(closure.z)
}

/// Rows (t, b, c, d) on a uniform grid over the stretched schedule.
pub fn sample_schedule(schedule: &TwoQubitSchedule, samples: usize) -> Vec<[f64; 4]> {
    let total = schedule.total_duration();
    (0..=samples.max(1))
        .map(|i| {
            let t = total * i as f64 / samples.max(1) as f64;
            let [b, c, d] = schedule.at(t);
            [t, b, c, d]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn decoupled_blocks() {
        let (c, d, tau) = (0.3, -0.7, 5.0);
        let s = TwoQubitSchedule::constant(0.0, c, d, tau).unwrap();
        let p = propagate_two_qubit(&s).unwrap();
        let l = extract_logical(&p.unitary).unwrap();
        assert!(l.leakage < 1e-14);
        let expect = ideal_entangling(-c * tau, -d * tau);
        assert!(max_diff(&l.unitary, &expect) < 1e-9);
    }

    #[test]
    fn closure_from_three_pi() {
        let eta = eta_constant();
        // θx(1) = 3π
        let s = TwoQubitSchedule::bump(3.0 * PI / (10.0 * eta), 0.0, 0.0, 10.0).unwrap();
        let c = tune_closure(&s, 1.0).unwrap();
        assert!((c.z - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(c.k, 2);
        assert!((c.theta_x - 4.0 * PI).abs() < 1e-12);
        assert!(matches!(tune_closure(&TwoQubitSchedule::bump(0.0, 1.0, 1.0, 10.0).unwrap(), 1.0), Err(Error::NoClosure)));
    }

    #[test]
    fn stretch_doubles_theta() {
        let s = TwoQubitSchedule::bump(0.8, 0.1, 0.0, 40.0).unwrap();
        let twice = s.with_stretch(2.0).unwrap();
        assert!((twice.theta_x() - 2.0 * s.theta_x()).abs() < 1e-12 * s.theta_x());
    }

    #[test]
    fn tuned_gate_closes_subspace() {
        let s = TwoQubitSchedule::bump(0.5, 0.05, -0.02, 100.0).unwrap();
        let g = calibrate_entangling(&s, 1.0).unwrap();
        assert!(g.logical.leakage < 1e-8, "{}", g.logical.leakage);
        assert!(g.propagation.unitarity_error < 1e-9);
        assert!(max_diff(&g.propagation.unitary, &two_qubit_closed_form(&g.schedule)) < 1e-8);
        assert!(g.infidelity < 1e-10, "{}", g.infidelity);
        assert!(entangling_check(g.propagation.alpha, g.propagation.beta));
    }

    #[test]
    fn entangling_examples() {
        assert!(entangling_check(PI / 2.0, 0.0));
        assert!(!entangling_check(PI, PI));
    }

    #[test]
    fn designed_schedule_hits_phases() {
        let s = design_entangling_schedule(PI / 2.0, PI / 2.0, 0.4, 50.0, 1.0).unwrap();
        let [th, ic, id] = s.integrals();
        assert!(((th / (2.0 * PI)).round() * 2.0 * PI - th).abs() < 1e-10);
        assert!((ic + PI / 2.0).abs() < 1e-12 && (id + PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_endpoints_enforced() {
        let s = vec![0.0, 0.5, 1.0];
        assert!(TwoQubitSchedule::sampled(s.clone(), vec![0.0, 1.0, 0.0], vec![0.0; 3], vec![0.0; 3], 1.0).is_ok());
        assert!(TwoQubitSchedule::sampled(s, vec![0.1, 1.0, 0.0], vec![0.0; 3], vec![0.0; 3], 1.0).is_err());
    }
}
