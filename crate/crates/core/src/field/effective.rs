use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numerics::quad;

/// Two-body terms of the nonrelativistic Hamiltonian at separation r.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectivePotential {
    /// Coefficient of δ(x_i − x_j), energy × length.
    pub contact_strength: f64,
    /// Attractive two-particle-exchange term at r, energy.
    pub attractive: f64,
}

/// λ/(4m²)·(1 + λ/(4πm²)).
pub fn contact_strength(m: f64, lambda: f64) -> f64 {
    lambda / (4.0 * m * m) * (1.0 + lambda / (4.0 * PI * m * m))
}

/// ∫₀¹ dy e^{−mr/√(y(1−y))}/√(y(1−y)), evaluated as ∫₀^{π/2} 2e^{−2mr/sin 2u} du
/// after y = sin²u. Equals π at r = 0.
pub fn exchange_kernel(m: f64, r: f64) -> f64 {
    let a = 2.0 * m * r;
    if a == 0.0 {
        return PI;
    }
    // symmetric about u = π/4
    let f = |u: f64| {
        let s = (2.0 * u).sin();
        if s <= 0.0 {
            0.0
        } else {
            4.0 * (-a / s).exp()
        }
    };
    let scale = 4.0 * (-a).exp();
    quad::integrate(f, 0.0, 0.5 * FRAC_PI_2, 1e-300_f64.max(scale * 1e-15), 1e-13).value
}

/// −(λ²/(32πm³))·[`exchange_kernel`].
pub fn attractive_potential(r: f64, m: f64, lambda: f64) -> f64 {
    -lambda * lambda / (32.0 * PI * m.powi(3)) * exchange_kernel(m, r)
}

pub fn effective_potential(r: f64, m: f64, lambda: f64) -> Result<EffectivePotential> {
    if !(m > 0.0) || !(r >= 0.0) || !lambda.is_finite() {
        return Err(invalid("effective potential needs m > 0, r ≥ 0 and finite λ"));
    }
    Ok(EffectivePotential {
        contact_strength: contact_strength(m, lambda),
        attractive: attractive_potential(r, m, lambda),
    })
}
