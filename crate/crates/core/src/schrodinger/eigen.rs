use serde::{Deserialize, Serialize};

use super::{PotentialKind, PotentialSpec, UnitsConvention};
use crate::error::{invalid, Error, Result};
use crate::numerics::{linspace, trapezoid, tridiag};
use crate::tolerances;

/// Uniform grid with hard walls at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(invalid(format!("grid needs at least 3 points, got {n_points}")));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(invalid(format!("grid bounds [{x_min}, {x_max}] are not an interval")));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.n_points)
    }

    /// Same interval with the spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }
}

/// Bound states of a 1D problem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenSolution {
    pub energies: Vec<f64>,
    /// One row per state, sampled on every grid point (zero at the walls).
    pub wavefunctions: Vec<Vec<f64>>,
    pub grid: Grid,
    pub units: UnitsConvention,
}

impl EigenSolution {
    /// Trapezoid-rule overlap of states `i` and `j`.
    pub fn overlap(&self, i: usize, j: usize) -> f64 {
        let prod: Vec<f64> = self.wavefunctions[i]
            .iter()
            .zip(&self.wavefunctions[j])
            .map(|(a, b)| a * b)
            .collect();
        trapezoid(&prod, self.grid.spacing())
    }

    /// ∫ψ_k(x)ψ_k(-x)dx, meaningful on grids symmetric about the origin.
    pub fn parity(&self, k: usize) -> f64 {
        let psi = &self.wavefunctions[k];
        let prod: Vec<f64> = psi.iter().zip(psi.iter().rev()).map(|(a, b)| a * b).collect();
        trapezoid(&prod, self.grid.spacing())
    }
}

/// Finite-difference Hamiltonian restricted to the interior points.
pub fn hamiltonian_tridiagonal(potential: &PotentialSpec, grid: &Grid) -> (Vec<f64>, Vec<f64>) {
    let k = potential.units.kinetic_prefactor();
    let h = grid.spacing();
    let xs = grid.points();
    let c = k / (h * h);
    let diag: Vec<f64> = xs[1..grid.n_points - 1]
        .iter()
        .map(|&x| 2.0 * c + potential.value(x))
        .collect();
    let off = vec![-c; grid.n_points.saturating_sub(3)];
    (diag, off)
}

/// Fix sign: positive at the first lobe reaching a tenth of the peak.
fn fix_sign(psi: &mut [f64], ground: bool) {
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let pivot = if ground {
        psi.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap_or(0.0)
    } else {
        psi.iter().copied().find(|v| v.abs() >= 0.1 * peak).unwrap_or(0.0)
    };
    if pivot < 0.0 {
        psi.iter_mut().for_each(|v| *v = -*v);
    }
}

/// Largest |ψ| / max|ψ| over the outer 5% of the box on either side.
pub fn boundary_tail(psi: &[f64]) -> f64 {
    let n = psi.len();
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let w = (n / 20).max(2);
    let edge = psi[..w]
        .iter()
        .chain(&psi[n - w..])
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        0.0
    } else {
        edge / peak
    }
}

/// Lowest bound states of `potential` on `grid`.
pub fn solve_bound_states(potential: &PotentialSpec, grid: &Grid, max_states: usize) -> Result<EigenSolution> {
    potential.validate()?;
    let threshold = potential.threshold();
    let (diag, off) = hamiltonian_tridiagonal(potential, grid);
    if diag.iter().any(|v| !v.is_finite()) {
        return Err(invalid("potential is not finite on the grid"));
    }
    let n_bound = tridiag::sturm_count(&diag, &off, threshold).min(max_states);
    if n_bound == 0 {
        return Err(Error::NoBoundStates {
            asymptote: threshold,
        });
    }
    let (energies, vectors) = tridiag::lowest_eigenpairs(&diag, &off, n_bound);
    let h = grid.spacing();
    let mut wavefunctions = Vec::with_capacity(n_bound);
    for (idx, v) in vectors.into_iter().enumerate() {
        let mut psi = Vec::with_capacity(grid.n_points);
        psi.push(0.0);
        psi.extend(v);
        psi.push(0.0);
        let norm = trapezoid(&psi.iter().map(|p| p * p).collect::<Vec<_>>(), h).sqrt();
        psi.iter_mut().for_each(|p| *p /= norm);
        fix_sign(&mut psi, idx == 0);
        let tail = boundary_tail(&psi);
        if tail > tolerances::BOX_TAIL {
            return Err(Error::BoxTooSmall {
                tail,
                limit: tolerances::BOX_TAIL,
            });
        }
        wavefunctions.push(psi);
    }
    for w in energies.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::IntegrationFailure(format!(
                "degenerate eigenvalues {} and {} on this grid",
                w[0], w[1]
            )));
        }
    }
    Ok(EigenSolution {
        energies,
        wavefunctions,
        grid: *grid,
        units: potential.units,
    })
}

/// Default grid: potential support padded by 20 decay lengths of the
/// shallowest requested state, 2048 points.
pub fn default_grid(potential: &PotentialSpec, max_states: usize) -> Result<Grid> {
    let (lo, hi) = potential.support(1e-12);
    let k = potential.units.kinetic_prefactor();
    let depth = linspace(lo, hi, 4001)
        .iter()
        .map(|&x| potential.value(x))
        .fold(f64::INFINITY, f64::min);
    let threshold = potential.threshold();
    // provisional box from the deepest point, then refine with the solved levels
    let kappa_guess = ((threshold - depth).max(1e-6) / k).sqrt();
    let pad0 = 40.0 / kappa_guess.max(1e-3) + (hi - lo);
    let trial = Grid::new(lo - pad0, hi + pad0, 4096)?;
    let (diag, off) = hamiltonian_tridiagonal(potential, &trial);
    let n_bound = tridiag::sturm_count(&diag, &off, threshold).min(max_states.max(1));
    if n_bound == 0 {
        return Err(Error::NoBoundStates {
            asymptote: threshold,
        });
    }
    let e_top = tridiag::kth_eigenvalue(&diag, &off, n_bound - 1);
    let kappa = ((threshold - e_top).max(1e-12) / k).sqrt();
    let pad = 20.0 / kappa;
    Grid::new(lo - pad, hi + pad, 2048)
}

/// Exact ground energy of `-k d² - α²λ(λ-1) sech²(αx)`, i.e. `-kα²ν²` with
/// ν(ν+1) = λ(λ-1)/k. For k = 1 this is `-α²(λ-1)²`.
pub fn poschl_teller_ground(alpha: f64, lambda: f64, units: &UnitsConvention) -> f64 {
    let k = units.kinetic_prefactor();
    let s = lambda * (lambda - 1.0) / k;
    let nu = 0.5 * (-1.0 + (1.0 + 4.0 * s).sqrt());
    -k * alpha * alpha * nu * nu
}

/// QES closed-form levels (E₁, E₂), valid with ħ = 2m = 1.
pub fn qes_energies(g: f64, b: f64) -> (f64, f64) {
    let d = 4.0 * (1.0 + g) * (1.0 + g);
    let e1 = -(2.0 + g - 4.0 * b * (1.0 + g)).powi(2) / d;
    let e2 = -(2.0 + 3.0 * g - 4.0 * b * (1.0 + g)).powi(2) / d;
    (e1, e2)
}

/// QES splitting E₂ - E₁ = 2g(2b-1)/(1+g).
pub fn qes_splitting(g: f64, b: f64) -> f64 {
    2.0 * g * (2.0 * b - 1.0) / (1.0 + g)
}

/// Closed-form energies for the exactly solvable kinds.
pub fn exact_energies(potential: &PotentialSpec) -> Result<Vec<f64>> {
    match potential.kind {
        PotentialKind::PoschlTeller { alpha, lambda } => {
            Ok(vec![poschl_teller_ground(alpha, lambda, &potential.units)])
        }
        PotentialKind::Qes { g, b } => {
            if potential.units != UnitsConvention::HbarTwoMassOne {
                return Err(Error::Unsupported(format!(
                    "QES closed forms in {}",
                    potential.units.label()
                )));
            }
            let (e1, e2) = qes_energies(g, b);
            Ok(vec![e1, e2])
        }
        _ => Err(Error::Unsupported(format!("{:?}", potential.kind))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 1.0, 2).is_err());
        assert!(Grid::new(1.0, 1.0, 10).is_err());
        let g = Grid::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.refined().n_points, 9);
    }

    #[test]
    fn poschl_teller_closed_form_values() {
        let u = UnitsConvention::HbarTwoMassOne;
        assert_eq!(poschl_teller_ground(2.0, 3.0, &u), -16.0);
        assert!((poschl_teller_ground(1.0, 2.0, &u) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn qes_closed_forms() {
        let (e1, e2) = qes_energies(0.01, 1.0);
        assert!((e1 + 1.009926).abs() < 1e-6);
        assert!((e2 + 0.990124).abs() < 1e-6);
        assert!((e1 + 1.009_925_497_500_245_2).abs() < 1e-15);
        assert!((e2 + 0.990_123_517_302_225_5).abs() < 1e-15);
        let (a, b) = qes_energies(0.0, 1.7);
        assert_eq!(a, b);
        assert!((a + (2.0 - 4.0 * 1.7f64).powi(2) / 4.0).abs() < 1e-14);
        assert!((e2 - e1 - qes_splitting(0.01, 1.0)).abs() < 1e-14);
    }

    #[test]
    fn free_particle_has_no_bound_states() {
        let p = PotentialSpec::square_barrier(0.0, 1.0, 1.0).unwrap();
        let grid = Grid::symmetric(10.0, 201).unwrap();
        assert!(matches!(
            solve_bound_states(&p, &grid, 4),
            Err(Error::NoBoundStates { .. })
        ));
    }

    #[test]
    fn small_box_is_rejected() {
        let p = PotentialSpec::poschl_teller(1.0, 2.0, UnitsConvention::HbarTwoMassOne).unwrap();
        let grid = Grid::symmetric(3.0, 601).unwrap();
        assert!(matches!(
            solve_bound_states(&p, &grid, 1),
            Err(Error::BoxTooSmall { .. })
        ));
    }

    #[test]
    fn default_grid_solves() {
        let p = PotentialSpec::poschl_teller(1.0, 3.0, UnitsConvention::HbarTwoMassOne).unwrap();
        let grid = default_grid(&p, 2).unwrap();
        let sol = solve_bound_states(&p, &grid, 2).unwrap();
        assert_eq!(sol.energies.len(), 2);
        assert!((sol.energies[0] + 4.0).abs() < 1e-2);
    }
}
