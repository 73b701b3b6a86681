use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::modes::ModeBasis;
use crate::error::{invalid, Error, Result};

/// Vacuum statistics of the windowed Hamiltonian H_f = Σₓ a f(x) ℋ(x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub mean: f64,
    pub variance: f64,
    /// ⟨1₀|H_f|1₀⟩ − ⟨0|H_f|0⟩ for one quantum in the lowest mode.
    pub shift: f64,
    /// Coefficient norm of [a₀†, H_f] − [a₀†, H] as a linear form in (q, p).
    pub commutator_defect: f64,
}

/// Local-energy probe on a complete free-field mode basis.
///
/// In canonical variables q = √a φ, p = √a π the lattice Hamiltonian is
/// ½pᵀp + ½qᵀMq and H_f = ½pᵀFp + ½qᵀM_f q, with the gradient links weighted
/// by the envelope at the link midpoint. `envelope` holds f on every grid point.
pub fn local_energy_probe(envelope: &[f64], basis: &ModeBasis) -> Result<ProbeResult> {
    let grid = &basis.grid;
    if envelope.len() != grid.n_points {
        return Err(Error::DimensionMismatch(envelope.len(), grid.n_points));
    }
    if !basis.is_complete() {
        return Err(invalid("local-energy probe needs the complete lattice basis"));
    }
    let n = basis.sites();
    let h = grid.spacing();
    let c = 1.0 / (h * h);
    let mass2 = basis.mass_profile();
    let f: Vec<f64> = envelope[1..grid.n_points - 1].to_vec();
    let link = |k: usize| 0.5 * (envelope[k] + envelope[k + 1]);

    // M_f: diagonal and first off-diagonal; link k joins grid points k and k+1
    let mf_diag: Vec<f64> = (0..n).map(|i| f[i] * mass2[i] + c * (link(i) + link(i + 1))).collect();
    let mf_off: Vec<f64> = (0..n.saturating_sub(1)).map(|i| -c * link(i + 1)).collect();
    let m_diag: Vec<f64> = (0..n).map(|i| mass2[i] + 2.0 * c).collect();

    let sq = h.sqrt();
    let v = DMatrix::from_fn(n, n, |i, l| basis.modes[l][i + 1] * sq);
    let mut mf = DMatrix::from_diagonal(&DVector::from_vec(mf_diag.clone()));
    for (i, &o) in mf_off.iter().enumerate() {
        mf[(i, i + 1)] = o;
        mf[(i + 1, i)] = o;
    }
    let a_modes = v.transpose() * &mf * &v;
    let fv = DMatrix::from_fn(n, n, |i, l| f[i] * v[(i, l)]);
    let b_modes = v.transpose() * fv;

    let omega = &basis.omegas;
    let dx: Vec<f64> = omega.iter().map(|w| 0.5 / w).collect();
    let dp: Vec<f64> = omega.iter().map(|w| 0.5 * w).collect();
    let mean = 0.5 * (0..n).map(|k| a_modes[(k, k)] * dx[k] + b_modes[(k, k)] * dp[k]).sum::<f64>();
    let mut sq_a = 0.0;
    let mut sq_b = 0.0;
    for k in 0..n {
        for l in 0..n {
            sq_a += a_modes[(k, l)].powi(2) * dx[k] * dx[l];
            sq_b += b_modes[(k, l)].powi(2) * dp[k] * dp[l];
        }
    }
    let cross: f64 = (0..n).map(|i| mf_diag[i] * f[i]).sum();
    let variance = 0.5 * (sq_a + sq_b - 0.5 * cross);

    let w0 = omega[0];
    let shift = 0.5 * (a_modes[(0, 0)] / w0 + w0 * b_modes[(0, 0)]);

    let v0: Vec<f64> = (0..n).map(|i| v[(i, 0)]).collect();
    let mut dq = 0.0;
    let mut dpn = 0.0;
    for i in 0..n {
        dpn += ((f[i] - 1.0) * v0[i]).powi(2);
        let mut row = (mf_diag[i] - m_diag[i]) * v0[i];
        if i > 0 {
            row += (mf_off[i - 1] + c) * v0[i - 1];
        }
        if i + 1 < n {
            row += (mf_off[i] + c) * v0[i + 1];
        }
        dq += row * row;
    }
    let commutator_defect = (0.5 * w0 * dpn + dq / (2.0 * w0)).sqrt();

    Ok(ProbeResult {
        mean,
        variance: variance.max(0.0),
        shift,
        commutator_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{mode_decomposition, sample_on_grid};
    use crate::schrodinger::Grid;

    fn basis(n: usize) -> ModeBasis {
        let grid = Grid::symmetric(12.0, n).unwrap();
        let j2 = sample_on_grid(&grid, |x| -0.3 / x.cosh().powi(2));
        mode_decomposition(&j2, 1.0, &grid, usize::MAX).unwrap()
    }

    #[test]
    fn unit_envelope_is_the_hamiltonian() {
        let b = basis(121);
        let r = local_energy_probe(&vec![1.0; 121], &b).unwrap();
        assert!((r.shift - b.omegas[0]).abs() < 1e-10);
        assert!(r.variance < 1e-9);
        assert!(r.commutator_defect < 1e-12);
        let zero_point: f64 = 0.5 * b.omegas.iter().sum::<f64>();
        assert!((r.mean - zero_point).abs() < 1e-9 * zero_point);
    }

    #[test]
    fn dense_oracle_variance() {
        // direct Gaussian-state covariance with X = ½M^{-1/2}, P = ½M^{1/2}
        let b = basis(41);
        let env = sample_on_grid(&b.grid, |x| (-(x / 3.0).powi(2)).exp());
        let r = local_energy_probe(&env, &b).unwrap();
        let n = b.sites();
        let h = b.grid.spacing();
        let c = 1.0 / (h * h);
        let m2 = b.mass_profile();
        let mut m = DMatrix::zeros(n, n);
        let mut mf = DMatrix::zeros(n, n);
        let f = DMatrix::from_diagonal(&DVector::from_iterator(n, env[1..n + 1].iter().copied()));
        for i in 0..n {
            m[(i, i)] = m2[i] + 2.0 * c;
            mf[(i, i)] = env[i + 1] * m2[i];
        }
        for k in 0..=n {
            let w = 0.5 * (env[k] + env[k + 1]) * c;
            // link between interior indices k-1 and k
            if k >= 1 {
                mf[(k - 1, k - 1)] += w;
            }
            if k < n {
                mf[(k, k)] += w;
            }
            if k >= 1 && k < n {
                mf[(k - 1, k)] -= w;
                mf[(k, k - 1)] -= w;
                m[(k - 1, k)] = -c;
                m[(k, k - 1)] = -c;
            }
        }
        let eig = m.clone().symmetric_eigen();
        let sqrt_m = &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * eig.eigenvectors.transpose();
        let inv_sqrt = &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues.map(|e| 1.0 / e.sqrt())) * eig.eigenvectors.transpose();
        let x = inv_sqrt * 0.5;
        let p = sqrt_m * 0.5;
        let ax = &mf * &x;
        let bp = &f * &p;
        let var = 0.5 * ((&ax * &ax).trace() + (&bp * &bp).trace() - 0.5 * (&mf * &f).trace());
        let mean = 0.5 * (ax.trace() + bp.trace());
        assert!((r.variance - var).abs() < 1e-9 * var.abs().max(1.0));
        assert!((r.mean - mean).abs() < 1e-9 * mean.abs().max(1.0));
    }

    #[test]
    fn incomplete_basis_rejected() {
        let grid = Grid::symmetric(12.0, 61).unwrap();
        let j2 = sample_on_grid(&grid, |x| -0.3 / x.cosh().powi(2));
        let b = mode_decomposition(&j2, 1.0, &grid, 5).unwrap();
        assert!(local_energy_probe(&vec![1.0; 61], &b).is_err());
    }
}
