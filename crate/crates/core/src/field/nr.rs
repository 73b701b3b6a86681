use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::effective::{attractive_potential, contact_strength};
use crate::error::{invalid, Error, Result};
use crate::numerics::lanczos;
use crate::schrodinger::Grid;

/// Default configuration-space budget: two particles on 256 sites.
pub const DEFAULT_BUDGET: usize = 256 * 256;

/// Few-body nonrelativistic Hamiltonian on the interior sites of a hard-wall
/// grid, stored as one-body and pair terms and applied matrix-free.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NrHamiltonian {
    pub particles: usize,
    pub sites: usize,
    pub spacing: f64,
    pub mass: f64,
    pub lambda: f64,
    pub include_relativistic: bool,
    /// One-body diagonal: kinetic diagonal plus J₂/m.
    one_diag: Vec<f64>,
    /// One-body bands: off[k][i] couples site i and i+k+1.
    one_off: Vec<Vec<f64>>,
    /// Pair potential by site distance, contact folded into distance 0.
    pair: Vec<f64>,
}

/// Assemble p²/2m (optionally −p⁴/8m³), J₂(x)/m and the pairwise contact plus
/// attractive terms for `particles` bosons.
pub fn nr_hamiltonian_terms(
    particles: usize,
    grid: &Grid,
    j2: &[f64],
    m: f64,
    lambda: f64,
    include_relativistic: bool,
    budget: usize,
) -> Result<NrHamiltonian> {
    if !(1..=3).contains(&particles) {
        return Err(invalid(format!("{particles} particles outside the supported 1..=3")));
    }
    if j2.len() != grid.n_points {
        return Err(Error::DimensionMismatch(j2.len(), grid.n_points));
    }
    if !(m > 0.0) {
        return Err(invalid("mass must be positive"));
    }
    let sites = grid.n_points - 2;
    let size = sites.checked_pow(particles as u32).unwrap_or(usize::MAX);
    if size > budget {
        return Err(Error::GridTooLarge { size, budget });
    }
    let h = grid.spacing();
    let c = 1.0 / (h * h);
    // p² = −∂² as the three-point stencil; p⁴ as its square
    let mut one_diag: Vec<f64> = j2[1..grid.n_points - 1].iter().map(|j| c / m + j / m).collect();
    let mut one_off = vec![vec![-0.5 * c / m; sites.saturating_sub(1)]];
    if include_relativistic {
        let r = -1.0 / (8.0 * m.powi(3));
        for (i, d) in one_diag.iter_mut().enumerate() {
            // walls remove one neighbour from the squared stencil at the ends
            let neighbours = if sites == 1 { 0.0 } else if i == 0 || i + 1 == sites { 1.0 } else { 2.0 };
            *d += r * c * c * (4.0 + neighbours);
        }
        one_off[0].iter_mut().for_each(|v| *v += r * c * c * (-4.0));
        one_off.push(vec![r * c * c; sites.saturating_sub(2)]);
    }
    let pair = if particles > 1 {
        let mut p: Vec<f64> = (0..sites).map(|k| attractive_potential(k as f64 * h, m, lambda)).collect();
        p[0] += contact_strength(m, lambda) / h;
        p
    } else {
        Vec::new()
    };
    Ok(NrHamiltonian {
        particles,
        sites,
        spacing: h,
        mass: m,
        lambda,
        include_relativistic,
        one_diag,
        one_off,
        pair,
    })
}

impl NrHamiltonian {
    pub fn dim(&self) -> usize {
        self.sites.pow(self.particles as u32)
    }

    fn coords(&self, mut idx: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = idx % self.sites;
            idx /= self.sites;
        }
    }

    fn potential(&self, coords: &[usize]) -> f64 {
        let mut v: f64 = coords.iter().map(|&i| self.one_diag[i]).sum();
        for a in 0..coords.len() {
            for b in a + 1..coords.len() {
                v += self.pair[coords[a].abs_diff(coords[b])];
            }
        }
        v
    }

    /// y = H x.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.sites;
        let p = self.particles;
        let mut co = vec![0usize; p];
        for (idx, out) in y.iter_mut().enumerate() {
            self.coords(idx, &mut co);
            let mut acc = self.potential(&co) * x[idx];
            let mut stride = 1usize;
            for axis in (0..p).rev() {
                let i = co[axis];
                for (k, band) in self.one_off.iter().enumerate() {
                    let d = k + 1;
                    if i >= d {
                        acc += band[i - d] * x[idx - d * stride];
                    }
                    if i + d < n {
                        acc += band[i] * x[idx + d * stride];
                    }
                }
                stride *= n;
            }
            *out = acc;
        }
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            self.apply(&e, &mut col);
            m.set_column(j, &nalgebra::DVector::from_column_slice(&col));
            e[j] = 0.0;
        }
        m
    }

    /// Lowest eigenvalue by restarted Lanczos.
    pub fn ground_energy(&self) -> Result<f64> {
        let r = lanczos::lowest(self.dim(), |x, y| self.apply(x, y), 60, 1e-9, 400)?;
        Ok(r.value)
    }
}

/// Two-particle binding δ = 2E₁ − E₂ from the one- and two-body ground states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairBinding {
    pub one_body: f64,
    pub two_body: f64,
    pub delta: f64,
}

pub fn pair_binding(grid: &Grid, j2: &[f64], m: f64, lambda: f64, budget: usize) -> Result<PairBinding> {
    let one = nr_hamiltonian_terms(1, grid, j2, m, lambda, false, budget)?.ground_energy()?;
    let two = nr_hamiltonian_terms(2, grid, j2, m, lambda, false, budget)?.ground_energy()?;
    Ok(PairBinding {
        one_body: one,
        two_body: two,
        delta: 2.0 * one - two,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schrodinger::{solve_bound_states, PotentialKind, PotentialSpec, UnitsConvention};

    fn setup(half: f64, n: usize) -> (Grid, Vec<f64>) {
        let grid = Grid::symmetric(half, n).unwrap();
        let j2 = grid.points().iter().map(|x| -0.8 / x.cosh().powi(2)).collect();
        (grid, j2)
    }

    #[test]
    fn single_particle_matches_schrodinger_core() {
        let (grid, j2) = setup(30.0, 601);
        let m = 1.3;
        let h = nr_hamiltonian_terms(1, &grid, &j2, m, 0.0, false, DEFAULT_BUDGET).unwrap();
        let v: Vec<f64> = j2.iter().map(|j| j / m).collect();
        let pot = PotentialSpec::new(PotentialKind::Tabulated { x: grid.points(), v }, UnitsConvention::Natural { mass: m }).unwrap();
        let reference = solve_bound_states(&pot, &grid, 1).unwrap();
        let dense = h.dense().symmetric_eigen();
        let lowest = dense.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        assert!((lowest - reference.energies[0]).abs() < 1e-8);
    }

    #[test]
    fn relativistic_term_lowers_levels() {
        let (grid, j2) = setup(8.0, 81);
        let plain = nr_hamiltonian_terms(1, &grid, &j2, 1.0, 0.0, false, DEFAULT_BUDGET).unwrap().dense();
        let rel = nr_hamiltonian_terms(1, &grid, &j2, 1.0, 0.0, true, DEFAULT_BUDGET).unwrap().dense();
        let mut a: Vec<f64> = plain.symmetric_eigen().eigenvalues.iter().copied().collect();
        let mut b: Vec<f64> = rel.symmetric_eigen().eigenvalues.iter().copied().collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert!(a.iter().zip(&b).all(|(x, y)| y < x));
    }

    #[test]
    fn lanczos_matches_dense_for_two_particles() {
        let (grid, j2) = setup(8.0, 31);
        let h = nr_hamiltonian_terms(2, &grid, &j2, 1.0, 0.05, false, DEFAULT_BUDGET).unwrap();
        let dense = h.dense();
        assert!((&dense - dense.transpose()).abs().max() < 1e-12);
        let lowest = dense.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        assert!((h.ground_energy().unwrap() - lowest).abs() < 1e-8);
    }

    #[test]
    fn budget_enforced() {
        let (grid, j2) = setup(8.0, 300);
        assert!(matches!(
            nr_hamiltonian_terms(2, &grid, &j2, 1.0, 0.1, false, DEFAULT_BUDGET),
            Err(Error::GridTooLarge { .. })
        ));
    }

    #[test]
    fn binding_is_linear_in_lambda() {
        let (grid, j2) = setup(10.0, 82);
        let lambdas = [1e-3, 4e-3, 7e-3, 1e-2];
        let deltas: Vec<f64> = lambdas.iter().map(|&l| pair_binding(&grid, &j2, 1.0, l, DEFAULT_BUDGET).unwrap().delta).collect();
        let (slope, intercept) = crate::numerics::linear_fit(&lambdas, &deltas);
        for (l, d) in lambdas.iter().zip(&deltas) {
            assert!((d - (slope * l + intercept)).abs() < 0.05 * (slope * l).abs(), "λ={l} δ={d}");
            assert!(*d < 0.0);
        }
    }
}
