use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::POISSON_SUM;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreationReport {
    /// n̄_l = |J̃₁(ω_l, l)|²/(2ω_l).
    pub mean_occupations: Vec<f64>,
    /// P(0) = exp(−Σ n̄_l).
    pub p0: f64,
    /// Single-particle probabilities P(k).
    pub single: Vec<f64>,
    /// Whether `single` carries the 1/(2ω_k) factor.
    pub poisson_consistent: bool,
    /// poisson[l][n]: probability of n quanta in mode l.
    pub poisson: Vec<Vec<f64>>,
}

/// Poisson weights e^{−μ}μⁿ/n! until the tail is below 10⁻¹⁵.
pub fn poisson_table(mu: f64) -> Vec<f64> {
    if mu == 0.0 {
        return vec![1.0];
    }
    let mut out = Vec::new();
    let mut log_p = -mu;
    let mut acc = 0.0;
    let mut n = 0usize;
    loop {
        let p = log_p.exp();
        out.push(p);
        acc += p;
        // past the mode, stop once the remaining mass is negligible
        if (n as f64) > mu && 1.0 - acc < 1e-15 {
            break;
        }
        n += 1;
        log_p += mu.ln() - (n as f64).ln();
        if n > 100_000 {
            break;
        }
    }
    out
}

/// Particle-creation statistics from the mode overlaps. With
/// `poisson_consistent` false, P(k) = |J̃₁(ω_k, k)|²·P(0); with it true,
/// P(k) = n̄_k·P(0), the one-quantum Poisson entry.
pub fn creation_probabilities(overlaps: &[Complex64], omegas: &[f64], poisson_consistent: bool) -> Result<CreationReport> {
    if overlaps.len() != omegas.len() {
        return Err(Error::DimensionMismatch(overlaps.len(), omegas.len()));
    }
    let mean: Vec<f64> = overlaps.iter().zip(omegas).map(|(j, w)| j.norm_sqr() / (2.0 * w)).collect();
    let p0 = (-mean.iter().sum::<f64>()).exp();
    let single = overlaps
        .iter()
        .zip(&mean)
        .map(|(j, n)| if poisson_consistent { n * p0 } else { j.norm_sqr() * p0 })
        .collect();
    let poisson: Vec<Vec<f64>> = mean.iter().map(|&m| poisson_table(m)).collect();
    for row in &poisson {
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > POISSON_SUM {
            return Err(Error::IntegrationFailure(format!("Poisson table sums to {s}")));
        }
    }
    Ok(CreationReport {
        mean_occupations: mean,
        p0,
        single,
        poisson_consistent,
        poisson,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn creation_examples() {
        let r = creation_probabilities(&[Complex64::new(0.0, 0.0); 3], &[1.0, 2.0, 3.0], false).unwrap();
        assert_eq!(r.p0, 1.0);
        // |J̃|² = 2ω gives n̄ = 1
        let j = Complex64::new(0.0, 3.0f64.sqrt());
        let r = creation_probabilities(&[j], &[1.5], false).unwrap();
        assert!((r.p0 - (-1.0f64).exp()).abs() < 1e-14);
        assert!((r.single[0] / r.p0 - j.norm_sqr()).abs() < 1e-12);
        assert!((r.poisson[0][0] - r.p0).abs() < 1e-15);
        let c = creation_probabilities(&[j], &[1.5], true).unwrap();
        assert!((c.single[0] - c.poisson[0][1]).abs() < 1e-15);
    }

    #[test]
    fn poisson_tables_sum_to_one() {
        for mu in [1e-6, 0.3, 1.0, 7.5, 60.0, 400.0] {
            let t = poisson_table(mu);
            assert!((t.iter().sum::<f64>() - 1.0).abs() < 1e-12, "μ = {mu}");
        }
    }
}
