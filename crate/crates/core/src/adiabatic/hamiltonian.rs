use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

pub type CMatrix = DMatrix<Complex64>;

type Evaluator = Arc<dyn Fn(f64) -> CMatrix + Send + Sync>;

/// H(s) on s ∈ [0, 1] with physical time t = sτ.
///
/// Evaluators are called slightly outside [0, 1] by the finite-difference
/// derivative and must stay defined there.
#[derive(Clone)]
pub struct TimeDependentHamiltonian {
    dim: usize,
    duration: f64,
    eval: Evaluator,
    derivative: Option<Evaluator>,
    /// Gevrey order of the schedule, when it is built from bumps.
    pub gevrey_order: Option<f64>,
}

impl fmt::Debug for TimeDependentHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeDependentHamiltonian")
            .field("dim", &self.dim)
            .field("duration", &self.duration)
            .field("analytic_derivative", &self.derivative.is_some())
            .field("gevrey_order", &self.gevrey_order)
            .finish()
    }
}

const HERMITIAN_TOL: f64 = 1e-12;
const FD_STEP: f64 = 1e-3;

impl TimeDependentHamiltonian {
    pub fn new<F>(dim: usize, duration: f64, eval: F) -> Result<Self>
    where
        F: Fn(f64) -> CMatrix + Send + Sync + 'static,
    {
        if dim == 0 {
            return Err(invalid("Hamiltonian dimension must be positive"));
        }
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(invalid("duration must be positive"));
        }
        let h = Self {
            dim,
            duration,
            eval: Arc::new(eval),
            derivative: None,
            gevrey_order: None,
        };
        for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let m = h.at(s);
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch(m.nrows(), dim));
            }
            if !is_hermitian(&m, HERMITIAN_TOL) {
                return Err(invalid(format!("H({s}) is not Hermitian")));
            }
        }
        Ok(h)
    }

    /// Real symmetric schedule.
    pub fn real<F>(dim: usize, duration: f64, eval: F) -> Result<Self>
    where
        F: Fn(f64) -> DMatrix<f64> + Send + Sync + 'static,
    {
        Self::new(dim, duration, move |s| eval(s).map(|v| Complex64::new(v, 0.0)))
    }

    /// Supply dH/ds analytically.
    pub fn with_derivative<F>(mut self, d: F) -> Self
    where
        F: Fn(f64) -> CMatrix + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn with_gevrey_order(mut self, alpha: f64) -> Self {
        self.gevrey_order = Some(alpha);
        self
    }

    pub fn with_duration(&self, duration: f64) -> Result<Self> {
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(invalid("duration must be positive"));
        }
        Ok(Self {
            duration,
            ..self.clone()
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn at(&self, s: f64) -> CMatrix {
        (self.eval)(s)
    }

    /// dH/ds: analytic when supplied, else a fourth-order central difference.
    pub fn ds(&self, s: f64) -> CMatrix {
        if let Some(d) = &self.derivative {
            return d(s);
        }
        let h = FD_STEP;
        let a = self.at(s + h) - self.at(s - h);
        let b = self.at(s + 2.0 * h) - self.at(s - 2.0 * h);
        (a * Complex64::new(8.0, 0.0) - b) / Complex64::new(12.0 * h, 0.0)
    }

    /// dH/dt = (dH/ds)/τ.
    pub fn dt(&self, s: f64) -> CMatrix {
        self.ds(s) / Complex64::new(self.duration, 0.0)
    }

    /// Largest singular value of dH/dt over `samples` points.
    pub fn derivative_norm(&self, samples: usize) -> f64 {
        crate::numerics::linspace(0.0, 1.0, samples.max(2))
            .into_iter()
            .map(|s| spectral_norm(&self.dt(s)))
            .fold(0.0, f64::max)
    }
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    let scale = m.iter().map(|v| v.norm()).fold(1.0, f64::max);
    (m - m.adjoint()).iter().all(|v| v.norm() <= tol * scale)
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Ascending eigenvalues and matching eigenvector columns.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let e = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let values = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(m.nrows(), m.ncols());
    for (j, &i) in order.iter().enumerate() {
        vectors.set_column(j, &e.eigenvectors.column(i));
    }
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_difference_matches_analytic() {
        let h = TimeDependentHamiltonian::real(2, 3.0, |s| DMatrix::from_row_slice(2, 2, &[s * s, s.sin(), s.sin(), -s])).unwrap();
        let d = h.ds(0.4);
        assert!((d[(0, 0)].re - 0.8).abs() < 1e-10);
        assert!((d[(0, 1)].re - 0.4f64.cos()).abs() < 1e-10);
        assert!((h.dt(0.4)[(1, 1)].re + 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let r = TimeDependentHamiltonian::real(2, 1.0, |_| DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        assert!(r.is_err());
    }

    #[test]
    fn eigh_sorted() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(3.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.5, 0.0),
        ]));
        let (e, v) = eigh(&m);
        assert_eq!(e, vec![-1.0, 0.5, 3.0]);
        assert!((v[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }
}
