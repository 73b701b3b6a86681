use std::io::Write;

use num_complex::Complex64;

use super::hamiltonian::{eigh, CMatrix, TimeDependentHamiltonian};
use crate::error::{invalid, Error, Result};
use crate::tolerances::GAP_FLOOR;

/// Gap floor relative to the spectral range of `energies`.
pub fn gap_floor(energies: &[f64]) -> f64 {
    let range = energies.last().unwrap_or(&0.0) - energies.first().unwrap_or(&0.0);
    GAP_FLOOR * range.abs().max(1.0)
}

/// Make the largest component of each column real and positive.
fn canonical_phases(v: &mut CMatrix) {
    for j in 0..v.ncols() {
        let mut best = Complex64::new(0.0, 0.0);
        for i in 0..v.nrows() {
            if v[(i, j)].norm() > best.norm() + 1e-12 {
                best = v[(i, j)];
            }
        }
        if best.norm() > 0.0 {
            let p = best.conj() / best.norm();
            v.column_mut(j).iter_mut().for_each(|x| *x *= p);
        }
    }
}

/// Adiabatic-frame generator at `s` in the eigenbasis `vectors`:
/// M_jj = E_j and M_jk = i⟨L_j|dH/dt|L_k⟩/(E_j − E_k).
pub fn generator_in_basis(system: &TimeDependentHamiltonian, s: f64, energies: &[f64], vectors: &CMatrix) -> Result<CMatrix> {
    let n = energies.len();
    let floor = gap_floor(energies);
    let dh = vectors.adjoint() * system.dt(s) * vectors;
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        m[(j, j)] = Complex64::new(energies[j], 0.0);
        for k in 0..n {
            if j == k {
                continue;
            }
            let gap = energies[j] - energies[k];
            if gap.abs() < floor {
                return Err(Error::DegenerateGap { gap: gap.abs(), floor });
            }
            m[(j, k)] = Complex64::new(0.0, 1.0) * dh[(j, k)] / gap;
        }
    }
    Ok(m)
}

/// M at `s` with eigenvector phases fixed by [`canonical_phases`].
pub fn frame_generator(system: &TimeDependentHamiltonian, s: f64) -> Result<CMatrix> {
    let (e, mut v) = eigh(&system.at(s));
    canonical_phases(&mut v);
    generator_in_basis(system, s, &e, &v)
}

/// Eigen-decomposition sampled along s with overlap tracking and discrete
/// parallel transport (successive overlaps real and positive).
#[derive(Debug, Clone)]
pub struct FrameTrajectory {
    pub s: Vec<f64>,
    /// energies[i][k]: energy of tracked level k at sample i.
    pub energies: Vec<Vec<f64>>,
    /// vectors[i]: columns are the tracked eigenvectors at sample i.
    pub vectors: Vec<CMatrix>,
    /// assignments[i][k]: energy-order index of tracked level k at sample i.
    pub assignments: Vec<Vec<usize>>,
}

impl FrameTrajectory {
    pub fn build(system: &TimeDependentHamiltonian, samples: usize) -> Result<Self> {
        if samples < 2 {
            return Err(invalid("trajectory needs at least two samples"));
        }
        let s = crate::numerics::linspace(0.0, 1.0, samples);
        let n = system.dim();
        let (e0, mut v0) = eigh(&system.at(0.0));
        canonical_phases(&mut v0);
        let mut energies = vec![e0];
        let mut vectors = vec![v0];
        let mut assignments = vec![(0..n).collect::<Vec<_>>()];
        for &si in &s[1..] {
            let (e, v) = eigh(&system.at(si));
            let prev = vectors.last().expect("non-empty");
            let ov = prev.adjoint() * &v;
            // greedy maximal-overlap matching, largest overlaps first
            let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
            for k in 0..n {
                for j in 0..n {
                    pairs.push((ov[(k, j)].norm(), k, j));
                }
            }
            pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
            let mut assign = vec![usize::MAX; n];
            let mut taken = vec![false; n];
            for (_, k, j) in pairs {
                if assign[k] == usize::MAX && !taken[j] {
                    assign[k] = j;
                    taken[j] = true;
                }
            }
            let mut tracked = CMatrix::zeros(n, n);
            let mut te = vec![0.0; n];
            for k in 0..n {
                let j = assign[k];
                let o = ov[(k, j)];
                let phase = if o.norm() > 0.0 { o.conj() / o.norm() } else { Complex64::new(1.0, 0.0) };
                tracked.set_column(k, &(v.column(j) * phase));
                te[k] = e[j];
            }
            energies.push(te);
            vectors.push(tracked);
            assignments.push(assign);
        }
        Ok(Self {
            s,
            energies,
            vectors,
            assignments,
        })
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Smallest gap above the lowest `d` levels (energy order) over the samples.
    pub fn min_gap(&self, d: usize) -> f64 {
        self.energies
            .iter()
            .map(|e| {
                let mut sorted = e.clone();
                sorted.sort_by(f64::total_cmp);
                if d < sorted.len() {
                    sorted[d] - sorted[d - 1]
                } else {
                    f64::INFINITY
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn generator(&self, system: &TimeDependentHamiltonian, i: usize) -> Result<CMatrix> {
        generator_in_basis(system, self.s[i], &self.energies[i], &self.vectors[i])
    }

    /// Eigenvectors at arbitrary s, phase-aligned to the nearest sample.
    pub fn aligned_basis(&self, system: &TimeDependentHamiltonian, s: f64) -> (Vec<f64>, CMatrix) {
        let h = 1.0 / (self.len() - 1) as f64;
        let i = ((s / h).round().max(0.0) as usize).min(self.len() - 1);
        let reference = &self.vectors[i];
        let (e, v) = eigh(&system.at(s));
        let ov = reference.adjoint() * &v;
        let n = e.len();
        let mut out = CMatrix::zeros(n, n);
        let mut te = vec![0.0; n];
        let mut taken = vec![false; n];
        for k in 0..n {
            let j = (0..n)
                .filter(|&j| !taken[j])
                .max_by(|&a, &b| ov[(k, a)].norm().total_cmp(&ov[(k, b)].norm()))
                .expect("free column");
            taken[j] = true;
            let o = ov[(k, j)];
            out.set_column(k, &(v.column(j) * (o.conj() / o.norm())));
            te[k] = e[j];
        }
        (te, out)
    }

    /// CSV with columns s, E_0, …, E_{n−1} (tracked order).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let n = self.energies.first().map_or(0, Vec::len);
        let mut header = vec!["s".to_string()];
        header.extend((0..n).map(|k| format!("E_{k}")));
        w.write_record(&header)?;
        for (s, e) in self.s.iter().zip(&self.energies) {
            let mut row = vec![format!("{s:.16e}")];
            row.extend(e.iter().map(|v| format!("{v:.16e}")));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn constant_hamiltonian_gives_diagonal_generator() {
        let h = TimeDependentHamiltonian::real(3, 5.0, |_| DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.3, -1.0, 2.0]))).unwrap();
        let m = frame_generator(&h, 0.4).unwrap();
        let expect = [-1.0, 0.3, 2.0];
        for j in 0..3 {
            for k in 0..3 {
                let v = if j == k { expect[j] } else { 0.0 };
                assert!((m[(j, k)] - Complex64::new(v, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn parallel_transport_overlaps_positive() {
        let h = TimeDependentHamiltonian::new(2, 1.0, |s| {
            let phi = 3.0 * s;
            let c = Complex64::from_polar(0.5, phi);
            CMatrix::from_row_slice(2, 2, &[Complex64::new(-0.5, 0.0), c.conj(), c, Complex64::new(0.5, 0.0)])
        })
        .unwrap();
        let t = FrameTrajectory::build(&h, 101).unwrap();
        for i in 1..t.len() {
            let ov = t.vectors[i - 1].adjoint() * &t.vectors[i];
            for k in 0..2 {
                assert!(ov[(k, k)].re > 0.0 && ov[(k, k)].im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn crossing_tracked_by_overlap() {
        // diagonal levels cross at s = 1/2 with no coupling
        let h = TimeDependentHamiltonian::real(2, 1.0, |s| DMatrix::from_row_slice(2, 2, &[s - 0.5, 0.0, 0.0, 0.5 - s])).unwrap();
        let t = FrameTrajectory::build(&h, 40).unwrap();
        let last = t.energies.last().unwrap();
        // level that started lowest (0.5 - s at s = 0 is 0.5; s - 0.5 is -0.5) keeps its identity
        assert!((last[0] - 0.5).abs() < 1e-12 && (last[1] + 0.5).abs() < 1e-12);
        assert!(frame_generator(&h, 0.5).is_err());
    }
}
