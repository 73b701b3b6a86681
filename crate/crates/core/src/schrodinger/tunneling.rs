use serde::{Deserialize, Serialize};

use super::wronskian::square_barrier_wronskian;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TunnelingEstimate {
    /// WKB-style amplitude exp(-ℓ √(2m(V - E))).
    pub tunneling: f64,
    /// (λ/m²) W², the overlap-driven interaction scale.
    pub interaction_scale: f64,
}

/// Tunneling amplitude through a barrier of excess height V - E and width ℓ,
/// and the interaction scale it implies. For small λ the interaction is
/// parametrically below the tunneling amplitude.
pub fn tunneling_and_interaction_estimates(v: f64, ell: f64, e: f64, m: f64, lambda: f64) -> Result<TunnelingEstimate> {
    if !(m > 0.0) {
        return Err(invalid("mass must be positive"));
    }
    if v < e {
        return Err(Error::ClassicallyAllowed { v, e });
    }
    let w = (-ell * (2.0 * m * (v - e)).sqrt()).exp();
    Ok(TunnelingEstimate {
        tunneling: w,
        interaction_scale: lambda / (m * m) * w * w,
    })
}

/// Barrier width giving tunneling amplitude `target` for excess height V - E.
pub fn separation_for_tunneling(excess: f64, m: f64, target: f64) -> Result<f64> {
    if !(excess > 0.0 && m > 0.0 && target > 0.0 && target < 1.0) {
        return Err(invalid("need positive barrier excess, mass and target in (0, 1)"));
    }
    Ok(-target.ln() / (2.0 * m * excess).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressedPropagator {
    /// -2/W.
    pub exact: f64,
    pub large_ell_approx: f64,
    pub m_eff: f64,
}

/// Two-point function across a square J₂ barrier of height mV and width ℓ.
pub fn dressed_propagator(m: f64, v: f64, ell: f64) -> Result<DressedPropagator> {
    if !(m > 0.0) || !(v >= 0.0) || !(ell >= 0.0) {
        return Err(invalid("dressed propagator needs m > 0, V ≥ 0, ℓ ≥ 0"));
    }
    let m_eff = (m * m + 2.0 * m * v).sqrt();
    let r = (m * m + m * v) / (m * m_eff);
    Ok(DressedPropagator {
        exact: -2.0 / square_barrier_wronskian(m, v, ell),
        large_ell_approx: -(-ell * m_eff).exp() / (m * (1.0 + r)),
        m_eff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tunneling_examples() {
        let t = tunneling_and_interaction_estimates(1.0, 3.0, 1.0, 1.0, 0.1).unwrap();
        assert_eq!(t.tunneling, 1.0);
        let t = tunneling_and_interaction_estimates(0.5, 3.0, 0.0, 1.0, 0.01).unwrap();
        assert!((t.tunneling - (-3.0f64).exp()).abs() < 1e-15);
        assert!((t.interaction_scale - 0.01 * (-6.0f64).exp()).abs() < 1e-17);
        assert!(matches!(
            tunneling_and_interaction_estimates(0.0, 1.0, 1.0, 1.0, 0.1),
            Err(Error::ClassicallyAllowed { .. })
        ));
    }

    #[test]
    fn propagator_examples() {
        let d = dressed_propagator(1.0, 1.5, 1.0).unwrap();
        assert_eq!(d.m_eff, 2.0);
        let d = dressed_propagator(1.0, 0.0, 2.0).unwrap();
        assert!((d.exact + (-2.0f64).exp() / 2.0).abs() < 1e-15);
        let d = dressed_propagator(1.0, 1.0, 10.0).unwrap();
        assert!(((d.exact - d.large_ell_approx) / d.exact).abs() < 1e-6);
    }

    #[test]
    fn separation_inverts_estimate() {
        let ell = separation_for_tunneling(0.3, 1.0, 1e-10).unwrap();
        let t = tunneling_and_interaction_estimates(0.3, ell, 0.0, 1.0, 0.0).unwrap();
        assert!((t.tunneling / 1e-10 - 1.0).abs() < 1e-12);
    }
}
