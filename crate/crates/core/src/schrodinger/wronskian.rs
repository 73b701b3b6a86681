//! Left/right decaying solutions, their Wronskian and the resolvent kernel.
//!
//! Solutions are normalized to √2 with exact exponential slopes at the
//! window edges; with that normalization the square-barrier Wronskian equals
//! `4m(cosh(ℓ m_eff) + ((m² + mV)/(m m_eff)) sinh(ℓ m_eff))`.

use std::f64::consts::SQRT_2;

use super::PotentialSpec;
use crate::error::{invalid, Error, Result};
use crate::numerics::Dopri5;
use crate::tolerances;

/// Integration window: the potential's support, or a caller-supplied one.
pub fn default_window(potential: &PotentialSpec) -> (f64, f64) {
    let (a, b) = potential.support(1e-14);
    if b > a {
        (a, b)
    } else {
        (a - 1.0, b + 1.0)
    }
}

fn edge_kappa(potential: &PotentialSpec, x: f64, z: f64, inside: f64) -> Result<f64> {
    // value just outside the window, so square edges use the asymptote
    let v = potential.value(x + inside);
    let k = potential.units.kinetic_prefactor();
    if !(v > z) {
        return Err(invalid(format!(
            "z = {z} is not below the potential {v} at the window edge {x}"
        )));
    }
    Ok(((v - z) / k).sqrt())
}

/// u and u' of the left-decaying solution at each of `xs`.
fn solve_left(
    potential: &PotentialSpec,
    z: f64,
    window: (f64, f64),
    xs: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let (xa, _) = window;
    let eps = 1e-9 * (1.0 + xa.abs());
    let kappa = edge_kappa(potential, xa, z, -eps)?;
    let k = potential.units.kinetic_prefactor();
    let mut stops: Vec<f64> = xs.to_vec();
    stops.extend(potential.breakpoints().into_iter().filter(|&b| b > xa));
    stops.sort_by(f64::total_cmp);
    stops.dedup();
    let end = *stops.last().unwrap_or(&xa);
    let ode = Dopri5::new(tolerances::WRONSKIAN_RTOL, 1e-13);
    let mut out = Vec::new();
    ode.integrate_with_stops(
        |x, y: &[f64], dy| {
            dy[0] = y[1];
            dy[1] = (potential.value(x) - z) / k * y[0];
        },
        xa,
        end,
        &[SQRT_2, SQRT_2 * kappa],
        &stops,
        |x, y| out.push((x, y[0], y[1])),
    )
    .map_err(|e| Error::IntegrationFailure(format!("u_L: {e}")))?;
    Ok(xs
        .iter()
        .map(|&x| {
            if x <= xa {
                let e = (kappa * (x - xa)).exp();
                (SQRT_2 * e, SQRT_2 * kappa * e)
            } else {
                let (_, u, du) = out.iter().find(|(t, _, _)| *t == x).copied().unwrap_or((x, f64::NAN, f64::NAN));
                (u, du)
            }
        })
        .collect())
}

/// u and u' of the right-decaying solution, integrated in s = -x.
fn solve_right(
    potential: &PotentialSpec,
    z: f64,
    window: (f64, f64),
    xs: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let (_, xb) = window;
    let eps = 1e-9 * (1.0 + xb.abs());
    let kappa = edge_kappa(potential, xb, z, eps)?;
    let k = potential.units.kinetic_prefactor();
    let s0 = -xb;
    let mut stops: Vec<f64> = xs.iter().map(|x| -x).collect();
    stops.extend(potential.breakpoints().into_iter().map(|b| -b).filter(|&s| s > s0));
    stops.sort_by(f64::total_cmp);
    stops.dedup();
    let end = *stops.last().unwrap_or(&s0);
    let ode = Dopri5::new(tolerances::WRONSKIAN_RTOL, 1e-13);
    let mut out = Vec::new();
    ode.integrate_with_stops(
        |s, y: &[f64], dy| {
            dy[0] = y[1];
            dy[1] = (potential.value(-s) - z) / k * y[0];
        },
        s0,
        end,
        &[SQRT_2, SQRT_2 * kappa],
        &stops,
        |s, y| out.push((s, y[0], y[1])),
    )
    .map_err(|e| Error::IntegrationFailure(format!("u_R: {e}")))?;
    Ok(xs
        .iter()
        .map(|&x| {
            if x >= xb {
                let e = (-kappa * (x - xb)).exp();
                (SQRT_2 * e, -SQRT_2 * kappa * e)
            } else {
                let (_, w, dw) = out.iter().find(|(s, _, _)| *s == -x).copied().unwrap_or((x, f64::NAN, f64::NAN));
                (w, -dw)
            }
        })
        .collect())
}

/// W(z) = u_L' u_R - u_L u_R' evaluated at each of `xs`.
pub fn wronskian_profile(
    potential: &PotentialSpec,
    z: f64,
    window: (f64, f64),
    xs: &[f64],
) -> Result<Vec<f64>> {
    let left = solve_left(potential, z, window, xs)?;
    let right = solve_right(potential, z, window, xs)?;
    let w: Vec<f64> = left
        .iter()
        .zip(&right)
        .map(|(&(ul, dul), &(ur, dur))| dul * ur - ul * dur)
        .collect();
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::IntegrationFailure("non-finite Wronskian".into()));
    }
    Ok(w)
}

/// Wronskian at the window midpoint.
pub fn wronskian(potential: &PotentialSpec, z: f64) -> Result<f64> {
    let window = default_window(potential);
    let mid = 0.5 * (window.0 + window.1);
    Ok(wronskian_profile(potential, z, window, &[mid])?[0])
}

/// Resolvent kernel G(x₁, x₂; z) = (H - z)⁻¹ = u_L(x<) u_R(x>) / (k W).
pub fn green_function(potential: &PotentialSpec, z: f64, x1: f64, x2: f64) -> Result<f64> {
    let window = default_window(potential);
    let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    let mid = 0.5 * (window.0 + window.1);
    let left = solve_left(potential, z, window, &[lo, mid])?;
    let right = solve_right(potential, z, window, &[mid, hi])?;
    let w = left[1].1 * right[0].0 - left[1].0 * right[0].1;
    let k = potential.units.kinetic_prefactor();
    Ok(left[0].0 * right[1].0 / (k * w))
}

/// Closed-form square-barrier Wronskian at z = -m/2.
pub fn square_barrier_wronskian(m: f64, v: f64, ell: f64) -> f64 {
    let me = (m * m + 2.0 * m * v).sqrt();
    4.0 * m * ((ell * me).cosh() + (m * m + m * v) / (m * me) * (ell * me).sinh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schrodinger::UnitsConvention;

    #[test]
    fn free_case_closed_form() {
        for &ell in &[0.5, 1.0, 3.0] {
            let p = PotentialSpec::square_barrier(0.0, ell, 1.0).unwrap();
            let w = wronskian(&p, -0.5).unwrap();
            assert!((w / (4.0 * ell.exp()) - 1.0).abs() < 1e-10, "{w}");
        }
    }

    #[test]
    fn square_barrier_matches_closed_form() {
        let p = PotentialSpec::square_barrier(1.5, 1.0, 1.0).unwrap();
        let w = wronskian(&p, -0.5).unwrap();
        let exact = square_barrier_wronskian(1.0, 1.5, 1.0);
        assert!((w / exact - 1.0).abs() < 1e-8);
    }

    #[test]
    fn x_independence_poschl_teller() {
        let p = PotentialSpec::poschl_teller(1.0, 2.5, UnitsConvention::HbarMassOne).unwrap();
        let window = default_window(&p);
        let xs = [-3.0, -1.0, 0.0, 0.7, 2.5];
        let w = wronskian_profile(&p, -0.3, window, &xs).unwrap();
        for v in &w {
            assert!((v / w[2] - 1.0).abs() < 1e-8, "{w:?}");
        }
    }

    #[test]
    fn green_function_is_free_resolvent_without_barrier() {
        // H = -(1/2m) d², z = -m/2: G = e^{-m|x1-x2|}
        let p = PotentialSpec::square_barrier(0.0, 2.0, 1.0).unwrap();
        let g = green_function(&p, -0.5, -0.3, 0.6).unwrap();
        assert!((g - (-0.9f64).exp()).abs() < 1e-9);
    }
}
