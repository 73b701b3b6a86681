use serde::{Deserialize, Serialize};

/// Overlap bound |⟨ψ̄|ψ⟩| ≥ 1 − (‖dH/dt‖/γ)·ε·t between reduced and full dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeakageBound {
    pub dh_norm: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub elapsed: f64,
    pub value: f64,
}

impl LeakageBound {
    pub fn new(dh_norm: f64, gamma: f64, epsilon: f64, elapsed: f64) -> Self {
        Self {
            dh_norm,
            gamma,
            epsilon,
            elapsed,
            value: leakage_overlap_bound(dh_norm, gamma, epsilon, elapsed),
        }
    }
}

pub fn leakage_overlap_bound(dh_norm: f64, gamma: f64, epsilon: f64, elapsed: f64) -> f64 {
    assert!(gamma > 0.0, "gap must be positive");
    (1.0 - dh_norm / gamma * epsilon * elapsed).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!((leakage_overlap_bound(1.0, 0.5, 1e-3, 10.0) - 0.98).abs() < 1e-15);
        assert_eq!(leakage_overlap_bound(1.0, 0.5, 0.0, 10.0), 1.0);
        assert_eq!(leakage_overlap_bound(1.0, 0.5, 1e-3, 1e9), 0.0);
    }
}
