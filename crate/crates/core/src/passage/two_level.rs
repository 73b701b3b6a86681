use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

/// Effective rotating-frame Hamiltonian [[0, Ω/2], [Ω/2, -Δ]] with its
/// mixing angle and dressed states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveHamiltonian {
    pub matrix: [[f64; 2]; 2],
    /// θ ∈ [0, π/2] with tan 2θ = -Ω/Δ.
    pub theta: f64,
    /// (E₊, E₋) = -Δ/2 ± √(Ω² + Δ²)/2.
    pub eigenvalues: (f64, f64),
    /// |+⟩ = sin θ |g⟩ + cos θ |e⟩, as (g, e) components.
    pub plus: [f64; 2],
    /// |-⟩ = cos θ |g⟩ - sin θ |e⟩.
    pub minus: [f64; 2],
}

impl EffectiveHamiltonian {
    pub fn as_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(
            self.matrix[0][0],
            self.matrix[0][1],
            self.matrix[1][0],
            self.matrix[1][1],
        )
    }
}

pub fn effective_hamiltonian(omega: f64, delta: f64) -> EffectiveHamiltonian {
    // atan2 keeps 2θ in [0, π] for Ω ≥ 0
    let theta = 0.5 * omega.atan2(-delta);
    let root = (omega * omega + delta * delta).sqrt();
    let (s, c) = theta.sin_cos();
    EffectiveHamiltonian {
        matrix: [[0.0, 0.5 * omega], [0.5 * omega, -delta]],
        theta,
        eigenvalues: (-0.5 * delta + 0.5 * root, -0.5 * delta - 0.5 * root),
        plus: [s, c],
        minus: [c, -s],
    }
}

/// Bound on the rotating-wave error: Ω/(2ω) + (ΩT/(4ω))(Δ + Ω).
pub fn rwa_error_bound(omega_rabi: f64, omega: f64, delta: f64, duration: f64) -> f64 {
    omega_rabi / (2.0 * omega) + omega_rabi * duration / (4.0 * omega) * (delta + omega_rabi)
}

/// Same bound with the factor-2 margin used when the drive also has
/// counter-rotating diagonal terms.
pub fn rwa_error_bound_with_diagonal(omega_rabi: f64, omega: f64, delta: f64, duration: f64) -> f64 {
    2.0 * rwa_error_bound(omega_rabi, omega, delta, duration)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn resonant_mixing() {
        let h = effective_hamiltonian(1.0, 0.0);
        assert!((h.theta - FRAC_PI_4).abs() < 1e-15);
        assert!((h.eigenvalues.0 - 0.5).abs() < 1e-15 && (h.eigenvalues.1 + 0.5).abs() < 1e-15);
    }

    #[test]
    fn eigenvalues_match_dense_solve() {
        let h = effective_hamiltonian(0.6, 0.8);
        let eig = h.as_matrix().symmetric_eigen();
        let mut v = [eig.eigenvalues[0], eig.eigenvalues[1]];
        v.sort_by(f64::total_cmp);
        assert!((v[0] + 0.9).abs() < 1e-14 && (v[1] - 0.1).abs() < 1e-14);
        assert!((h.eigenvalues.0 - 0.1).abs() < 1e-15 && (h.eigenvalues.1 + 0.9).abs() < 1e-15);
        // dressed states are eigenvectors
        let m = h.as_matrix();
        for (state, e) in [(h.plus, h.eigenvalues.0), (h.minus, h.eigenvalues.1)] {
            let v = nalgebra::Vector2::new(state[0], state[1]);
            assert!((m * v - v * e).norm() < 1e-14);
        }
    }

    #[test]
    fn uncoupled_below_resonance() {
        let h = effective_hamiltonian(0.0, -0.3);
        assert_eq!(h.theta, 0.0);
        assert_eq!(h.minus, [1.0, -0.0]);
    }

    #[test]
    fn bound_examples() {
        assert!((rwa_error_bound(0.01, 1.0, 0.0, 100.0) - 0.0075).abs() < 1e-15);
        assert_eq!(rwa_error_bound(0.0, 1.0, 0.3, 50.0), 0.0);
        assert_eq!(rwa_error_bound(0.02, 2.0, 0.3, 0.0), 0.005);
    }
}
