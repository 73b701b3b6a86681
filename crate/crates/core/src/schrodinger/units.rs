use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit system of a one-particle Hamiltonian `H = -k d²/dx² + V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "convention", rename_all = "snake_case")]
pub enum UnitsConvention {
    /// ħ = 1 with the mass kept explicit: k = 1/(2m).
    Natural { mass: f64 },
    /// ħ = 2m = 1: k = 1.
    HbarTwoMassOne,
    /// ħ = m = 1: k = 1/2.
    HbarMassOne,
}

impl UnitsConvention {
    /// Coefficient k of the kinetic term.
    pub fn kinetic_prefactor(&self) -> f64 {
        match *self {
            UnitsConvention::Natural { mass } => 0.5 / mass,
            UnitsConvention::HbarTwoMassOne => 1.0,
            UnitsConvention::HbarMassOne => 0.5,
        }
    }

    pub fn mass(&self) -> f64 {
        match *self {
            UnitsConvention::Natural { mass } => mass,
            UnitsConvention::HbarTwoMassOne => 0.5,
            UnitsConvention::HbarMassOne => 1.0,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            UnitsConvention::Natural { mass } => format!("natural(m={mass})"),
            UnitsConvention::HbarTwoMassOne => "hbar=2m=1".into(),
            UnitsConvention::HbarMassOne => "hbar=m=1".into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let UnitsConvention::Natural { mass } = *self {
            if !(mass > 0.0 && mass.is_finite()) {
                return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
            }
        }
        Ok(())
    }

    /// Error unless both quantities were produced under the same convention.
    pub fn ensure_same(&self, other: &UnitsConvention) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::UnitsMismatch(self.label(), other.label()))
        }
    }
}
