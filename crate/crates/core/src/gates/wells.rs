use serde::{Deserialize, Serialize};

use super::two_qubit::TwoQubitSchedule;
use crate::adiabatic::gevrey_bump;
use crate::error::{invalid, Result};
use crate::field::{contact_strength, exchange_kernel};
use crate::numerics::{linspace, trapezoid};
use crate::schrodinger::{solve_bound_states, Grid, PotentialKind, PotentialSpec, UnitsConvention};

/// Tunneling factor exp(−κℓ) below which the pair counts as decoupled.
const DECOUPLED: f64 = 1e-12;
/// Decay lengths of padding outside the wells.
const PAD_DECAY_LENGTHS: f64 = 30.0;
/// Kernel range in units of 1/(2m).
const KERNEL_RANGE: f64 = 40.0;

/// Instantaneous coefficients of the approaching center-well pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellCoefficients {
    pub separation: f64,
    /// Half the symmetric/antisymmetric splitting.
    pub b: f64,
    /// c = U + δ: both center wells occupied.
    pub c: f64,
    /// d = −δ: both empty.
    pub d: f64,
    /// Pair interaction U (contact plus attractive, direct plus exchange).
    pub interaction: f64,
    /// δ = (E_s + E_a)/2 − ε₀, the one-particle energy shift from the partner well.
    pub shift: f64,
}

impl WellCoefficients {
    fn zero(separation: f64) -> Self {
        Self {
            separation,
            b: 0.0,
            c: 0.0,
            d: 0.0,
            interaction: 0.0,
            shift: 0.0,
        }
    }
}

/// Identical square wells of potential depth `depth` (V = J₂/m) and width `width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellPair {
    pub depth: f64,
    pub width: f64,
    pub mass: f64,
}

impl WellPair {
    pub fn new(depth: f64, width: f64, mass: f64) -> Result<Self> {
        if !(depth > 0.0 && width > 0.0 && mass > 0.0) || !(depth.is_finite() && width.is_finite() && mass.is_finite()) {
            return Err(invalid("well pair needs positive finite depth, width and mass"));
        }
        Ok(Self { depth, width, mass })
    }

    fn units(&self) -> UnitsConvention {
        UnitsConvention::Natural { mass: self.mass }
    }

    fn potential(&self, depths: [f64; 2], separation: f64) -> Result<PotentialSpec> {
        PotentialSpec::new(
            PotentialKind::DoubleSquareWell {
                depths,
                widths: [self.width; 2],
                separation,
            },
            self.units(),
        )
    }

    /// Decay constant κ of the single-well ground state.
    fn decay_guess(&self) -> f64 {
        let k0 = (2.0 * self.mass * self.depth).sqrt();
        let theta = k0 * self.width / 2.0;
        // ground-state transcendental equation k tan(k w/2) = κ, k² + κ² = k0², by bisection on k
        let (mut lo, mut hi) = (0.0, theta.min(std::f64::consts::FRAC_PI_2 - 1e-15));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let kappa = (theta * theta - mid * mid).sqrt();
            if mid * mid.tan() < kappa {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (theta * theta - lo * lo).sqrt() * 2.0 / self.width
    }

    fn grid(&self, separation: f64) -> Result<Grid> {
        let kappa = self.decay_guess();
        let half = 0.5 * separation + self.width + PAD_DECAY_LENGTHS / kappa;
        let h = (self.width / 120.0).min(0.05 / kappa);
        let n = ((2.0 * half / h).ceil() as usize + 1).clamp(801, 12001);
        Grid::symmetric(half, n)
    }

    /// b, c, d at a fixed separation ℓ between the inner well edges.
    pub fn coefficients(&self, separation: f64, lambda: f64) -> Result<WellCoefficients> {
        if !(separation >= 0.0) {
            return Err(invalid("separation must be non-negative"));
        }
        let kappa = self.decay_guess();
        if !separation.is_finite() || (-kappa * separation).exp() < DECOUPLED {
            return Ok(WellCoefficients::zero(separation));
        }
        let grid = self.grid(separation)?;
        let pair = solve_bound_states(&self.potential([self.depth; 2], separation)?, &grid, 2)?;
        // single-well reference on the same grid, so discretization offsets cancel
        let single = solve_bound_states(&self.potential([self.depth, 0.0], separation)?, &grid, 1)?;
        if pair.energies.len() < 2 {
            return Err(invalid("well pair binds fewer than two states"));
        }
        let (es, ea) = (pair.energies[0], pair.energies[1]);
        let shift = 0.5 * (es + ea) - single.energies[0];
        let sq = std::f64::consts::FRAC_1_SQRT_2;
        let psi_l: Vec<f64> = pair.wavefunctions[0].iter().zip(&pair.wavefunctions[1]).map(|(s, a)| sq * (s + a)).collect();
        let psi_r: Vec<f64> = pair.wavefunctions[0].iter().zip(&pair.wavefunctions[1]).map(|(s, a)| sq * (s - a)).collect();
        let interaction = pair_interaction(&psi_l, &psi_r, grid.spacing(), self.mass, lambda);
        Ok(WellCoefficients {
            separation,
            b: 0.5 * (ea - es),
            c: interaction + shift,
            d: -shift,
            interaction,
            shift,
        })
    }
}

/// ⟨LR|V|LR⟩ for two bosons in orbitals ψ_L, ψ_R under contact plus
/// attractive pair terms: direct plus exchange.
pub fn pair_interaction(psi_l: &[f64], psi_r: &[f64], h: f64, m: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let n = psi_l.len();
    let dens_l: Vec<f64> = psi_l.iter().map(|v| v * v).collect();
    let dens_r: Vec<f64> = psi_r.iter().map(|v| v * v).collect();
    let cross: Vec<f64> = psi_l.iter().zip(psi_r).map(|(a, b)| a * b).collect();
    let overlap: Vec<f64> = dens_l.iter().zip(&dens_r).map(|(a, b)| a * b).collect();
    // contact: direct and exchange are equal
    let contact = 2.0 * contact_strength(m, lambda) * trapezoid(&overlap, h);
    let range = ((KERNEL_RANGE / (2.0 * m * h)).ceil() as usize).min(n - 1);
    let kernel: Vec<f64> = (0..=range).map(|k| exchange_kernel(m, k as f64 * h)).collect();
    let mut direct = 0.0;
    let mut exchange = 0.0;
    for i in 0..n {
        if dens_l[i] == 0.0 && cross[i] == 0.0 {
            continue;
        }
        let lo = i.saturating_sub(range);
        let hi = (i + range).min(n - 1);
        let (mut rd, mut rx) = (0.0, 0.0);
        for j in lo..=hi {
            let w = kernel[i.abs_diff(j)];
            rd += dens_r[j] * w;
            rx += cross[j] * w;
        }
        direct += dens_l[i] * rd;
        exchange += cross[i] * rx;
    }
    let attractive = -lambda * lambda / (32.0 * std::f64::consts::PI * m.powi(3)) * (direct + exchange) * h * h;
    contact + attractive
}

/// Center wells approaching along ℓ(s) = ℓ_min·B(½)/B(s): infinitely far at
/// both endpoints, closest at s = ½.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellApproach {
    pub wells: WellPair,
    pub closest: f64,
    pub duration: f64,
}

impl WellApproach {
    pub fn new(wells: WellPair, closest: f64, duration: f64) -> Result<Self> {
        if !(closest >= 0.0) || !(duration > 0.0) {
            return Err(invalid("approach needs closest separation ≥ 0 and positive duration"));
        }
        Ok(Self { wells, closest, duration })
    }

    pub fn separation(&self, s: f64) -> f64 {
        let bump = gevrey_bump(s);
        if bump == 0.0 {
            f64::INFINITY
        } else {
            self.closest * gevrey_bump(0.5) / bump
        }
    }
}

/// Sample b, c, d along the approach and interpolate into a schedule.
pub fn coefficients_from_wells(approach: &WellApproach, lambda: f64, samples: usize) -> Result<TwoQubitSchedule> {
    let samples = samples.max(3);
    let s = linspace(0.0, 1.0, samples);
    let mut b = Vec::with_capacity(samples);
    let mut c = Vec::with_capacity(samples);
    let mut d = Vec::with_capacity(samples);
    for &si in &s {
        let w = approach.wells.coefficients(approach.separation(si), lambda)?;
        b.push(w.b);
        c.push(w.c);
        d.push(w.d);
    }
    TwoQubitSchedule::sampled(s, b, c, d, approach.duration)
}
