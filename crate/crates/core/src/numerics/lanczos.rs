//! Restarted Lanczos for the lowest eigenpair of a symmetric operator.

use super::tridiag;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LanczosResult {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub cycles: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lowest eigenpair of the symmetric operator `apply` (y = A x) of size `n`.
/// Krylov blocks of `block` vectors with full reorthogonalization, restarted
/// from the current Ritz vector until the residual norm is below `tol`.
pub fn lowest<F>(n: usize, mut apply: F, block: usize, tol: f64, max_cycles: usize) -> Result<LanczosResult>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let block = block.clamp(2, n.max(2));
    let mut start: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.25 * ((i as f64) * 0.618_033_988_7).sin())
        .collect();
    let nrm = dot(&start, &start).sqrt();
    start.iter_mut().for_each(|x| *x /= nrm);
    let mut w = vec![0.0; n];
    let mut last = f64::NAN;

    for cycle in 0..max_cycles {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        for j in 0..block.min(n) {
            apply(&basis[j], &mut w);
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            // full reorthogonalization, twice for stability
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(&w, v);
                    w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
                }
            }
            let b = dot(&w, &w).sqrt();
            if j + 1 == block.min(n) || b < 1e-14 {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
        let m = alpha.len();
        let (vals, vecs) = tridiag::lowest_eigenpairs(&alpha, &beta[..m - 1], 1);
        let theta = vals[0];
        let coeff = &vecs[0];
        let mut ritz = vec![0.0; n];
        for (c, v) in coeff.iter().zip(&basis) {
            ritz.iter_mut().zip(v).for_each(|(r, x)| *r += c * x);
        }
        let nr = dot(&ritz, &ritz).sqrt();
        ritz.iter_mut().for_each(|x| *x /= nr);
        apply(&ritz, &mut w);
        let residual = w
            .iter()
            .zip(&ritz)
            .map(|(a, b)| (a - theta * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual < tol || (theta - last).abs() < 1e-15 * theta.abs().max(1.0) {
            return Ok(LanczosResult {
                value: theta,
                vector: ritz,
                residual,
                cycles: cycle + 1,
            });
        }
        last = theta;
        start = ritz;
    }
    Err(Error::IntegrationFailure(
        "Lanczos did not converge within the cycle budget".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn laplacian_ground_state() {
        let n = 400;
        let r = lowest(
            n,
            |x, y| {
                for i in 0..n {
                    let mut v = 2.0 * x[i];
                    if i > 0 {
                        v -= x[i - 1];
                    }
                    if i + 1 < n {
                        v -= x[i + 1];
                    }
                    y[i] = v;
                }
            },
            80,
            1e-10,
            400,
        )
        .unwrap();
        let exact = 2.0 - 2.0 * (PI / (n as f64 + 1.0)).cos();
        assert!((r.value - exact).abs() < 1e-11, "{} vs {}", r.value, exact);
    }
}
