use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::adiabatic::CMatrix;
use crate::error::{invalid, Error, Result};
use crate::tolerances::{ACCEPT_ABOVE, REJECT_BELOW};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Re,
    Im,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotResult {
    pub shots: u64,
    pub part: Part,
    /// 2p̂₀ − 1.
    pub estimate: f64,
    /// 2√(p₀(1 − p₀)/N) at the exact p₀.
    pub standard_error: f64,
    /// Exact probability of reading 0 on the control.
    pub p0: f64,
    pub seed: u64,
    /// ChaCha20 stream seeded with `seed`.
    pub generator: String,
}

/// Control-qubit probability of |0⟩ after H, controlled-U and H, with the
/// control started in |0⟩+|1⟩ (Re) or |0⟩ − i|1⟩ (Im).
fn control_zero_probability(u: &CMatrix, psi: &[Complex64], part: Part) -> f64 {
    let d = psi.len();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let c1 = match part {
        Part::Re => Complex64::new(r, 0.0),
        Part::Im => Complex64::new(0.0, -r),
    };
    let upsi: Vec<Complex64> = (0..d).map(|i| (0..d).map(|j| u[(i, j)] * psi[j]).sum()).collect();
    // control branch |0⟩: (r·ψ + c1·Uψ)/√2 after the final Hadamard
    let amp: f64 = (0..d).map(|i| ((psi[i] * r + upsi[i] * c1) * r).norm_sqr()).sum();
    amp.clamp(0.0, 1.0)
}

/// Sample the Hadamard test for `part` of ⟨ψ|U|ψ⟩ with N Bernoulli shots.
pub fn hadamard_test(u: &CMatrix, psi: &[Complex64], part: Part, shots: u64, seed: u64) -> Result<ShotResult> {
    if u.nrows() != u.ncols() || u.nrows() != psi.len() {
        return Err(Error::DimensionMismatch(u.nrows(), psi.len()));
    }
    if shots == 0 {
        return Err(invalid("Hadamard test needs at least one shot"));
    }
    let p0 = control_zero_probability(u, psi, part);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let zeros = (0..shots).filter(|_| rng.random::<f64>() < p0).count() as f64;
    let n = shots as f64;
    Ok(ShotResult {
        shots,
        part,
        estimate: 2.0 * zeros / n - 1.0,
        standard_error: 2.0 * (p0 * (1.0 - p0) / n).sqrt(),
        p0,
        seed,
        generator: "ChaCha20".into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    AboveTwoThirds,
    BelowOneThird,
    PromiseViolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub probability: f64,
    pub decision: Decision,
    /// Signed distance to the nearer threshold (negative inside the gap).
    pub margin: f64,
    pub gap: f64,
}

pub fn decision(p: f64) -> Result<DecisionReport> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("probability {p} outside [0, 1]")));
    }
    let decision = if p > ACCEPT_ABOVE {
        Decision::AboveTwoThirds
    } else if p < REJECT_BELOW {
        Decision::BelowOneThird
    } else {
        Decision::PromiseViolated
    };
    let margin = match decision {
        Decision::AboveTwoThirds => p - ACCEPT_ABOVE,
        Decision::BelowOneThird => REJECT_BELOW - p,
        Decision::PromiseViolated => -(p - REJECT_BELOW).min(ACCEPT_ABOVE - p),
    };
    Ok(DecisionReport {
        probability: p,
        decision,
        margin,
        gap: ACCEPT_ABOVE - REJECT_BELOW,
    })
}
