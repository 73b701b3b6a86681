//! Dormand-Prince 5(4) embedded Runge-Kutta integrator with adaptive steps.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Element type of an ODE state vector.
pub trait OdeScalar: Copy + Default + Add<Output = Self> + Mul<f64, Output = Self> {
    fn modulus(self) -> f64;
}

impl OdeScalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl OdeScalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive integrator settings.
#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    /// Largest allowed step; `None` means the full interval.
    pub h_max: Option<f64>,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            h_max: None,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

fn axpy<T: OdeScalar>(out: &mut [T], y: &[T], h: f64, terms: &[(&[T], f64)]) {
    for i in 0..out.len() {
        let mut acc = T::default();
        for (k, c) in terms {
            acc = acc + k[i] * *c;
        }
        out[i] = y[i] + acc * h;
    }
}

impl Dopri5 {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    pub fn with_max_step(mut self, h_max: f64) -> Self {
        self.h_max = Some(h_max);
        self
    }

    /// Integrate `y' = f(t, y)` from `t0` to `t1` and return the final state.
    pub fn integrate<T, F>(&self, f: F, t0: f64, t1: f64, y0: &[T]) -> Result<Vec<T>>
    where
        T: OdeScalar,
        F: FnMut(f64, &[T], &mut [T]),
    {
        self.integrate_with_stops(f, t0, t1, y0, &[], |_, _| {})
            .map(|(y, _)| y)
    }

    /// Like [`Dopri5::integrate`], but steps land exactly on each time in
    /// `stops` (sorted, inside `(t0, t1]`) and `on_stop` sees the state there.
    pub fn integrate_with_stops<T, F, O>(
        &self,
        mut f: F,
        t0: f64,
        t1: f64,
        y0: &[T],
        stops: &[f64],
        mut on_stop: O,
    ) -> Result<(Vec<T>, OdeStats)>
    where
        T: OdeScalar,
        F: FnMut(f64, &[T], &mut [T]),
        O: FnMut(f64, &[T]),
    {
        if !(t1 > t0) {
            if t1 == t0 {
                return Ok((y0.to_vec(), OdeStats::default()));
            }
            return Err(Error::IntegrationFailure(format!(
                "reversed interval [{t0}, {t1}]"
            )));
        }
        let n = y0.len();
        let span = t1 - t0;
        let h_max = self.h_max.unwrap_or(span).min(span);
        let mut stats = OdeStats::default();
        let mut y = y0.to_vec();
        let mut k1 = vec![T::default(); n];
        let mut k2 = vec![T::default(); n];
        let mut k3 = vec![T::default(); n];
        let mut k4 = vec![T::default(); n];
        let mut k5 = vec![T::default(); n];
        let mut k6 = vec![T::default(); n];
        let mut k7 = vec![T::default(); n];
        let mut tmp = vec![T::default(); n];
        let mut y_new = vec![T::default(); n];

        let mut t = t0;
        f(t, &y, &mut k1);
        stats.evaluations += 1;

        let mut h = self.initial_step(&y, &k1, span).min(h_max);
        let mut targets: Vec<f64> = stops
            .iter()
            .copied()
            .filter(|&s| s > t0 && s < t1)
            .collect();
        targets.push(t1);
        let mut next = 0usize;

        while next < targets.len() {
            if stats.accepted + stats.rejected >= self.max_steps {
                return Err(Error::IntegrationFailure(format!(
                    "step budget exhausted at t = {t}"
                )));
            }
            let target = targets[next];
            let mut hit = false;
            let mut step = h;
            if t + step >= target || (target - t - step) < 1e-12 * span {
                step = target - t;
                hit = true;
            }
            if step <= span * 1e-15 || !step.is_finite() {
                return Err(Error::IntegrationFailure(format!(
                    "step size underflow at t = {t}"
                )));
            }

            axpy(&mut tmp, &y, step, &[(&k1, A21)]);
            f(t + C2 * step, &tmp, &mut k2);
            axpy(&mut tmp, &y, step, &[(&k1, A31), (&k2, A32)]);
            f(t + C3 * step, &tmp, &mut k3);
            axpy(&mut tmp, &y, step, &[(&k1, A41), (&k2, A42), (&k3, A43)]);
            f(t + C4 * step, &tmp, &mut k4);
            axpy(
                &mut tmp,
                &y,
                step,
                &[(&k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)],
            );
            f(t + C5 * step, &tmp, &mut k5);
            axpy(
                &mut tmp,
                &y,
                step,
                &[(&k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)],
            );
            f(t + step, &tmp, &mut k6);
            axpy(
                &mut y_new,
                &y,
                step,
                &[(&k1, B1), (&k3, B3), (&k4, B4), (&k5, B5), (&k6, B6)],
            );
            let t_new = if hit { target } else { t + step };
            f(t_new, &y_new, &mut k7);
            stats.evaluations += 6;

            let mut err = 0.0f64;
            for i in 0..n {
                let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6
                    + k7[i] * E7)
                    * step;
                let scale =
                    self.atol + self.rtol * y[i].modulus().max(y_new[i].modulus());
                err = err.max(e.modulus() / scale);
            }
            if !err.is_finite() {
                return Err(Error::IntegrationFailure(format!(
                    "non-finite state near t = {t}"
                )));
            }

            if err <= 1.0 {
                stats.accepted += 1;
                t = t_new;
                std::mem::swap(&mut y, &mut y_new);
                std::mem::swap(&mut k1, &mut k7);
                if hit {
                    on_stop(t, &y);
                    next += 1;
                }
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // a step truncated to hit a stop should not shrink the next one
                h = (step.max(if hit { h } else { step }) * fac).min(h_max);
            } else {
                stats.rejected += 1;
                h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            }
        }
        Ok((y, stats))
    }

    fn initial_step<T: OdeScalar>(&self, y: &[T], dy: &[T], span: f64) -> f64 {
        let mut d0 = 0.0f64;
        let mut d1 = 0.0f64;
        for i in 0..y.len() {
            let sc = self.atol + self.rtol * y[i].modulus();
            d0 = d0.max(y[i].modulus() / sc);
            d1 = d1.max(dy[i].modulus() / sc);
        }
        let h = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6 * span
        } else {
            0.01 * d0 / d1
        };
        h.min(span).max(1e-12 * span)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let ode = Dopri5::new(1e-11, 1e-13);
        let y = ode
            .integrate(|_, y: &[f64], dy| dy[0] = -y[0], 0.0, 3.0, &[1.0])
            .unwrap();
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn harmonic_oscillator_complex() {
        let ode = Dopri5::new(1e-11, 1e-13);
        let w = 2.5;
        let y = ode
            .integrate(
                |_, y: &[Complex64], dy| dy[0] = Complex64::new(0.0, -w) * y[0],
                0.0,
                10.0,
                &[Complex64::new(1.0, 0.0)],
            )
            .unwrap();
        let exact = Complex64::from_polar(1.0, -w * 10.0);
        assert!((y[0] - exact).norm() < 1e-9);
    }

    #[test]
    fn stops_are_hit_exactly() {
        let ode = Dopri5::default();
        let stops = [0.25, 0.5, 0.75];
        let mut seen = Vec::new();
        ode.integrate_with_stops(
            |t, _y: &[f64], dy| dy[0] = t,
            0.0,
            1.0,
            &[0.0],
            &stops,
            |t, y| seen.push((t, y[0])),
        )
        .unwrap();
        assert_eq!(seen.len(), 4);
        for (t, y) in seen {
            assert!((y - 0.5 * t * t).abs() < 1e-12);
        }
    }
}
