use serde::{Deserialize, Serialize};

use super::hamiltonian::TimeDependentHamiltonian;
use super::propagate::{propagate_with, Mode, PropagateOptions};
use crate::error::{invalid, Result};
use crate::numerics::{linear_fit, quad};

/// B(s) = exp(−1/(s(1−s))) on (0, 1), zero elsewhere.
pub fn gevrey_bump(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        0.0
    } else {
        (-1.0 / (s * (1.0 - s))).exp()
    }
}

/// η = ∫₀¹ B(s) ds.
pub fn bump_integral() -> f64 {
    quad::integrate(gevrey_bump, 0.0, 1.0, 1e-16, 1e-14).value
}

/// B and its first `order` derivatives at s, from Taylor-coefficient recurrences.
pub fn bump_derivatives(s: f64, order: usize) -> Vec<f64> {
    if s <= 0.0 || s >= 1.0 {
        return vec![0.0; order + 1];
    }
    // p = s − s², q = 1/p, u = −q, y = exp(u); all as Taylor coefficients at s
    let p = [s - s * s, 1.0 - 2.0 * s, -1.0];
    let mut q = vec![0.0; order + 1];
    q[0] = 1.0 / p[0];
    for k in 1..=order {
        let mut acc = p[1] * q[k - 1];
        if k >= 2 {
            acc += p[2] * q[k - 2];
        }
        q[k] = -acc / p[0];
    }
    let u: Vec<f64> = q.iter().map(|v| -v).collect();
    let mut y = vec![0.0; order + 1];
    y[0] = u[0].exp();
    for k in 1..=order {
        let acc: f64 = (1..=k).map(|j| j as f64 * u[j] * y[k - j]).sum();
        y[k] = acc / k as f64;
    }
    let mut fact = 1.0;
    y.iter()
        .enumerate()
        .map(|(k, c)| {
            if k > 0 {
                fact *= k as f64;
            }
            c * fact
        })
        .collect()
}

/// sup_s |B^(k)(s)| for k = 0..=order on a uniform grid.
pub fn bump_derivative_sups(order: usize, samples: usize) -> Vec<f64> {
    let mut sups = vec![0.0f64; order + 1];
    for i in 1..samples {
        let s = i as f64 / samples as f64;
        for (k, d) in bump_derivatives(s, order).into_iter().enumerate() {
            sups[k] = sups[k].max(d.abs());
        }
    }
    sups
}

/// Constants with sups[k] ≤ C·R^k·k^(αk) for every supplied k (0⁰ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevreyFit {
    pub alpha: f64,
    pub c: f64,
    pub r: f64,
}

impl GevreyFit {
    pub fn bound(&self, k: usize) -> f64 {
        let kf = k as f64;
        let growth = if k == 0 { 1.0 } else { kf.powf(self.alpha * kf) };
        self.c * self.r.powi(k as i32) * growth
    }
}

/// Least-squares fit of ln sup_k − αk ln k against k, with C raised until the
/// bound covers every point.
pub fn fit_gevrey(sups: &[f64], alpha: f64) -> Result<GevreyFit> {
    if sups.len() < 2 || sups.iter().any(|v| !(*v > 0.0)) {
        return Err(invalid("need at least two positive derivative bounds"));
    }
    let ks: Vec<f64> = (0..sups.len()).map(|k| k as f64).collect();
    let ys: Vec<f64> = sups
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let kf = k as f64;
            v.ln() - if k == 0 { 0.0 } else { alpha * kf * kf.ln() }
        })
        .collect();
    let (ln_r, _) = linear_fit(&ks, &ys);
    let ln_c = ks.iter().zip(&ys).map(|(k, y)| y - ln_r * k).fold(f64::NEG_INFINITY, f64::max);
    Ok(GevreyFit {
        alpha,
        c: ln_c.exp(),
        r: ln_r.exp(),
    })
}

/// H(s) = diag(−Δ/2, Δ/2) + βB(s)σ_x; the ground state at s = 0 is |0⟩.
pub fn bump_two_level(delta: f64, beta: f64, duration: f64) -> Result<TimeDependentHamiltonian> {
    Ok(TimeDependentHamiltonian::real(2, duration, move |s| {
        let v = beta * gevrey_bump(s);
        nalgebra::DMatrix::from_row_slice(2, 2, &[-0.5 * delta, v, v, 0.5 * delta])
    })?
    .with_derivative(move |s| {
        let v = beta * bump_derivatives(s, 1)[1];
        let z = num_complex::Complex64::new(0.0, 0.0);
        let c = num_complex::Complex64::new(v, 0.0);
        nalgebra::DMatrix::from_row_slice(2, 2, &[z, c, c, z])
    })
    .with_gevrey_order(2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeakagePoint {
    pub duration: f64,
    /// Final-time excited-state probability.
    pub leakage: f64,
}

/// Final leakage of [`bump_two_level`] for each duration.
pub fn leakage_scan(delta: f64, beta: f64, durations: &[f64]) -> Result<Vec<LeakagePoint>> {
    durations
        .iter()
        .map(|&tau| {
            let h = bump_two_level(delta, beta, tau)?;
            let opts = PropagateOptions {
                trajectory_samples: 201,
                rtol: Some(1e-12),
            };
            let r = propagate_with(&h, 1, Mode::Full, &opts)?;
            Ok(LeakagePoint {
                duration: tau,
                leakage: r.leakage * r.leakage,
            })
        })
        .collect()
}

/// Slope of ln(−ln ε) against ln τ.
pub fn leakage_exponent(points: &[LeakagePoint]) -> Result<f64> {
    if points.len() < 2 || points.iter().any(|p| !(p.leakage > 0.0 && p.leakage < 1.0)) {
        return Err(invalid("leakage values must lie in (0, 1)"));
    }
    let x: Vec<f64> = points.iter().map(|p| p.duration.ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| (-p.leakage.ln()).ln()).collect();
    Ok(linear_fit(&x, &y).0)
}
