use serde::{Deserialize, Serialize};

use super::sweep::TwoLevelSweep;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Ω/B: misalignment of the dressed state at the sweep ends.
    RabiOverBandwidth,
    /// B²/(TΩ³): diabatic transitions.
    AdiabaticDuration,
    /// Ω/ω₀: rotating-wave boundary term.
    RabiOverSplitting,
    /// ΩBT/ω₀: accumulated rotating-wave error.
    RotatingWaveDuration,
    /// B/λ: two-particle level pushed out of band.
    BandwidthOverCoupling,
    /// g/B: off-band 1→2 amplitude.
    CouplingOverBandwidth,
    /// (g√T)³/√B: three-insertion production.
    TripleInsertion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub epsilon: f64,
    pub constant: f64,
    pub checks: Vec<ConditionCheck>,
    pub pass: bool,
}

impl ConditionReport {
    pub fn get(&self, c: Condition) -> &ConditionCheck {
        self.checks.iter().find(|k| k.condition == c).expect("report holds every condition")
    }

    /// Re-apply thresholds with a different constant.
    pub fn with_constant(&self, constant: f64) -> Self {
        let checks: Vec<ConditionCheck> = self
            .checks
            .iter()
            .map(|k| {
                let threshold = threshold_for(k.condition, self.epsilon, constant);
                ConditionCheck {
                    threshold,
                    pass: k.value <= threshold,
                    ..*k
                }
            })
            .collect();
        let pass = checks.iter().all(|k| k.pass);
        Self {
            epsilon: self.epsilon,
            constant,
            checks,
            pass,
        }
    }
}

fn threshold_for(c: Condition, epsilon: f64, constant: f64) -> f64 {
    match c {
        // B = O(λ) carries no power of ε
        Condition::BandwidthOverCoupling => constant,
        _ => constant * epsilon,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrepParameters {
    pub g: f64,
    pub rabi: f64,
    pub bandwidth: f64,
    pub duration: f64,
    pub omega0: f64,
    pub lambda: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn check_conditions(g: f64, rabi: f64, bandwidth: f64, duration: f64, omega0: f64, lambda: f64, epsilon: f64, constant: f64) -> Result<ConditionReport> {
    for (name, v) in [
        ("g", g),
        ("Ω", rabi),
        ("B", bandwidth),
        ("T", duration),
        ("ω₀", omega0),
        ("λ", lambda),
        ("ε", epsilon),
        ("C", constant),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(invalid(format!("{name} must be positive, got {v}")));
        }
    }
    let values = [
        (Condition::RabiOverBandwidth, rabi / bandwidth),
        (Condition::AdiabaticDuration, bandwidth * bandwidth / (duration * rabi.powi(3))),
        (Condition::RabiOverSplitting, rabi / omega0),
        (Condition::RotatingWaveDuration, rabi * bandwidth * duration / omega0),
        (Condition::BandwidthOverCoupling, bandwidth / lambda),
        (Condition::CouplingOverBandwidth, g / bandwidth),
        (Condition::TripleInsertion, (g * duration.sqrt()).powi(3) / bandwidth.sqrt()),
    ];
    let checks: Vec<ConditionCheck> = values
        .into_iter()
        .map(|(condition, value)| {
            let threshold = threshold_for(condition, epsilon, constant);
            ConditionCheck {
                condition,
                value,
                threshold,
                // relative slack so exact-scaling inputs are not lost to rounding
                pass: value <= threshold * (1.0 + 1e-12),
            }
        })
        .collect();
    let pass = checks.iter().all(|k| k.pass);
    Ok(ConditionReport {
        epsilon,
        constant,
        checks,
        pass,
    })
}

pub fn check_parameters(p: &PrepParameters, epsilon: f64, constant: f64) -> Result<ConditionReport> {
    check_conditions(p.g, p.rabi, p.bandwidth, p.duration, p.omega0, p.lambda, epsilon, constant)
}

/// Proportionality constants for the ε-scaling (all 1 by default).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPrefactors {
    pub g: f64,
    pub lambda: f64,
    pub bandwidth: f64,
    pub duration: f64,
}

impl Default for ScalingPrefactors {
    fn default() -> Self {
        Self {
            g: 1.0,
            lambda: 1.0,
            bandwidth: 1.0,
            duration: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledParameters {
    pub g: f64,
    pub lambda: f64,
    pub bandwidth: f64,
    pub duration: f64,
}

impl ScaledParameters {
    /// Parameters for a sweep with Ω = g·matrix_element.
    pub fn prep(&self, omega0: f64, matrix_element: f64) -> PrepParameters {
        PrepParameters {
            g: self.g,
            rabi: self.g * matrix_element,
            bandwidth: self.bandwidth,
            duration: self.duration,
            omega0,
            lambda: self.lambda,
        }
    }
}

/// g ~ ε⁵, λ ~ B ~ ε⁴, T ~ ε⁻⁸.
pub fn scale_parameters(epsilon: f64) -> Result<ScaledParameters> {
    scale_parameters_with(epsilon, &ScalingPrefactors::default())
}

pub fn scale_parameters_with(epsilon: f64, k: &ScalingPrefactors) -> Result<ScaledParameters> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(invalid(format!("ε must lie in (0, 1], got {epsilon}")));
    }
    Ok(ScaledParameters {
        g: k.g * epsilon.powi(5),
        lambda: k.lambda * epsilon.powi(4),
        bandwidth: k.bandwidth * epsilon.powi(4),
        duration: k.duration * epsilon.powi(-8),
    })
}

/// Scaling for an n-qubit, G-gate circuit: the per-qubit error is the
/// smaller of 1/n and G^(-1/4), so λ ~ min(n⁻⁴, 1/G) and T ~ max(n⁸, G²).
pub fn scale_for_circuit(n_qubits: usize, n_gates: usize, k: &ScalingPrefactors) -> Result<ScaledParameters> {
    if n_qubits == 0 {
        return Err(invalid("circuit needs at least one qubit"));
    }
    let by_width = 1.0 / n_qubits as f64;
    let by_depth = if n_gates == 0 {
        1.0
    } else {
        (n_gates as f64).powf(-0.25)
    };
    scale_parameters_with(by_width.min(by_depth), k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrepTime {
    /// 1/(m − 𝓑)².
    pub time: f64,
    /// The estimate holds up to a logarithmic factor in the target error.
    pub log_factor: bool,
}

pub fn prep_time_estimate(mass: f64, binding: f64) -> Result<PrepTime> {
    if !(mass > 0.0) || !binding.is_finite() {
        return Err(invalid("mass must be positive"));
    }
    if binding >= mass {
        return Err(Error::UnstableVacuum(format!("binding {binding} ≥ mass {mass}")));
    }
    let gap = mass - binding;
    Ok(PrepTime {
        time: 1.0 / (gap * gap),
        log_factor: true,
    })
}

/// Rescale time so that T ≤ `max_duration` with ω₀ fixed. The rotating-frame
/// dynamics (ΩT, BT) is unchanged; Ω/ω₀ grows by the rescaling factor.
pub fn rescaled_sweep(p: &PrepParameters, max_duration: f64) -> Result<TwoLevelSweep> {
    let s = (p.duration / max_duration).max(1.0);
    TwoLevelSweep::new(p.omega0, p.rabi * s, p.bandwidth * s, p.duration / s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_parameters_examples() {
        let p = scale_parameters(0.1).unwrap();
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        assert!(rel(p.g, 1e-5) < 1e-14);
        assert!(rel(p.lambda, 1e-4) < 1e-14);
        assert!(rel(p.bandwidth, 1e-4) < 1e-14);
        assert!(rel(p.duration, 1e8) < 1e-14);
        let one = scale_parameters(1.0).unwrap();
        assert_eq!((one.g, one.lambda, one.bandwidth, one.duration), (1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn circuit_scaling_by_depth() {
        let p = scale_for_circuit(4, 1000, &ScalingPrefactors::default()).unwrap();
        assert!((p.lambda - 1e-3).abs() < 1e-15);
        assert!((p.duration - 1e6).abs() < 1e-6);
        let shallow = scale_for_circuit(4, 10, &ScalingPrefactors::default()).unwrap();
        assert!((shallow.duration - 4f64.powi(8)).abs() < 1e-6);
    }

    #[test]
    fn scaled_parameters_pass_and_ratios() {
        let p = scale_parameters(0.1).unwrap().prep(1.0, 1.0);
        let r = check_parameters(&p, 0.1, 1.0).unwrap();
        assert_eq!(r.checks.len(), 7);
        assert!(r.pass);
        for c in [
            Condition::RabiOverBandwidth,
            Condition::AdiabaticDuration,
            Condition::RotatingWaveDuration,
            Condition::CouplingOverBandwidth,
            Condition::TripleInsertion,
        ] {
            assert!((r.get(c).value - 0.1).abs() < 1e-12, "{c:?}");
        }
        assert!((r.get(Condition::RabiOverSplitting).value - 1e-5).abs() < 1e-18);
        assert!((r.get(Condition::BandwidthOverCoupling).value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn violations_flagged() {
        let mut p = scale_parameters(0.1).unwrap().prep(1.0, 1.0);
        p.bandwidth *= 10.0;
        let r = check_parameters(&p, 0.1, 1.0).unwrap();
        assert!(!r.get(Condition::BandwidthOverCoupling).pass);
        assert!(!r.pass);

        let mut p = scale_parameters(0.1).unwrap().prep(1.0, 1.0);
        p.duration *= 1e4;
        let r = check_parameters(&p, 0.1, 1.0).unwrap();
        assert!(r.get(Condition::AdiabaticDuration).pass);
        assert!(!r.get(Condition::RotatingWaveDuration).pass);
    }

    #[test]
    fn prep_time() {
        assert_eq!(prep_time_estimate(1.0, 0.5).unwrap().time, 4.0);
        assert!((prep_time_estimate(1.0, 0.9).unwrap().time - 100.0).abs() < 1e-9);
        assert!(matches!(prep_time_estimate(1.0, 1.0), Err(Error::UnstableVacuum(_))));
    }

    #[test]
    fn rescaling_keeps_rotating_invariants() {
        let p = scale_parameters(0.1).unwrap().prep(1.0, 1.0);
        let s = rescaled_sweep(&p, 1e4).unwrap();
        assert!((s.duration - 1e4).abs() < 1e-8);
        assert!((s.rabi * s.duration - p.rabi * p.duration).abs() < 1e-9);
        assert!((s.bandwidth * s.duration - p.bandwidth * p.duration).abs() < 1e-9);
    }
}
