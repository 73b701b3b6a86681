use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bound::spectrum_bound;
use super::fresnel::fresnel;
use crate::error::{invalid, Error, Result};

/// f(t) = amplitude · (2/√T) · rect(t/T) · cos(ω₀t + κt²/2), with B = κT.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChirpSource {
    pub amplitude: f64,
    pub omega0: f64,
    pub kappa: f64,
    pub duration: f64,
}

impl ChirpSource {
    /// Unit-amplitude source from bandwidth and duration.
    pub fn new(omega0: f64, bandwidth: f64, duration: f64) -> Result<Self> {
        let s = Self {
            amplitude: 1.0,
            omega0,
            kappa: bandwidth / duration,
            duration,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(invalid("chirp duration must be positive"));
        }
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) || !self.omega0.is_finite() || !self.amplitude.is_finite() {
            return Err(invalid("chirp rate must be finite and non-negative"));
        }
        Ok(())
    }

    pub fn bandwidth(&self) -> f64 {
        self.kappa * self.duration
    }

    pub fn sample(&self, t: f64) -> f64 {
        let half = 0.5 * self.duration;
        let window = if t.abs() < half {
            1.0
        } else if t.abs() == half {
            0.5
        } else {
            0.0
        };
        self.amplitude * 2.0 / self.duration.sqrt() * window * (self.omega0 * t + 0.5 * self.kappa * t * t).cos()
    }

    /// ∫|f|² dt in closed form.
    pub fn energy(&self) -> f64 {
        let t = self.duration;
        let a2 = self.amplitude * self.amplitude;
        if self.kappa == 0.0 {
            let w = 2.0 * self.omega0;
            let osc = if w == 0.0 { t } else { 2.0 * (0.5 * w * t).sin() / w };
            return a2 * 2.0 / t * (t + osc);
        }
        // (2/T)∫cos(2ω₀t + κt²) = (2/T)∫cos(κ(t + ω₀/κ)² − ω₀²/κ)
        let k = self.kappa;
        let scale = (2.0 * k / PI).sqrt();
        let shift = self.omega0 / k;
        let ua = scale * (-0.5 * t + shift);
        let ub = scale * (0.5 * t + shift);
        let (ca, sa) = fresnel(ua);
        let (cb, sb) = fresnel(ub);
        let phi = self.omega0 * self.omega0 / k;
        let osc = (PI / (2.0 * k)).sqrt() * (phi.cos() * (cb - ca) + phi.sin() * (sb - sa));
        a2 * 2.0 / t * (t + osc)
    }
}

/// 𝒢±(ω) for g±(t) = (1/√T) rect(t/T) e^{±iκt²/2}, transform convention ∫ e^{-iωt}.
pub fn chirp_component(kappa: f64, duration: f64, omega: f64, sign: f64) -> Result<Complex64> {
    if kappa == 0.0 {
        return Err(Error::ZeroChirp);
    }
    let root = (kappa / PI).sqrt();
    let xp = root * (0.5 * duration - omega / kappa);
    let xm = root * (0.5 * duration + omega / kappa);
    let (cp, sp) = fresnel(xp);
    let (cm, sm) = fresnel(xm);
    let prefactor = (PI / (kappa * duration)).sqrt();
    let phase = Complex64::from_polar(1.0, -sign * omega * omega / (2.0 * kappa));
    Ok(phase * prefactor * Complex64::new(cp + cm, sign * (sp + sm)))
}

/// ℱ(ω) = 𝒢₊(ω − ω₀) + 𝒢₋(ω + ω₀), scaled by the source amplitude.
pub fn chirp_spectrum(source: &ChirpSource, omega: f64) -> Result<Complex64> {
    source.validate()?;
    let plus = chirp_component(source.kappa, source.duration, omega - source.omega0, 1.0)?;
    let minus = chirp_component(source.kappa, source.duration, omega + source.omega0, -1.0)?;
    Ok((plus + minus) * source.amplitude)
}

/// Transform of an unchirped windowed cosine, the κ → 0 limit.
pub fn windowed_cosine_spectrum(source: &ChirpSource, omega: f64) -> Complex64 {
    let t = source.duration;
    let sinc = |w: f64| {
        let x = 0.5 * w * t;
        if x.abs() < 1e-8 {
            t
        } else {
            2.0 * x.sin() / w
        }
    };
    let v = (sinc(omega - source.omega0) + sinc(omega + source.omega0)) / t.sqrt();
    Complex64::new(source.amplitude * v, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    pub omega: f64,
    pub value: Complex64,
    pub power: f64,
    /// Upper bound on |ℱ(ω)|².
    pub bound: f64,
}

pub fn spectrum_sweep(source: &ChirpSource, omegas: &[f64]) -> Result<Vec<SpectrumSample>> {
    omegas
        .iter()
        .map(|&omega| {
            let value = chirp_spectrum(source, omega)?;
            Ok(SpectrumSample {
                omega,
                value,
                power: value.norm_sqr(),
                bound: spectrum_bound(source, omega)?,
            })
        })
        .collect()
}

/// CSV columns: omega, re, im, power, bound.
pub fn write_spectrum_csv<W: Write>(samples: &[SpectrumSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["omega", "re", "im", "power", "bound"])?;
    for s in samples {
        w.write_record([
            format!("{:.16e}", s.omega),
            format!("{:.16e}", s.value.re),
            format!("{:.16e}", s.value.im),
            format!("{:.16e}", s.power),
            format!("{:.16e}", s.bound),
        ])?;
    }
    w.flush()?;
    Ok(())
}
