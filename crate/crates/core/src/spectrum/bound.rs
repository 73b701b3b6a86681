use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::chirp::ChirpSource;
use crate::error::{Error, Result};
use crate::tolerances::REGION_MARGIN;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    InBand,
    Transition,
    Tail,
    /// Between classification margins; the bound is the max of both neighbours.
    Ambiguous,
}

/// Worst-case coefficients of the large-BT expansion of (B/2π)|𝒢(ω)|².
/// Terms absent from a region are zero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Coefficients {
    pub c_m3: f64,
    pub c_m2: f64,
    pub c_m3_2: f64,
    pub c_m1: f64,
    pub c_m1_2: f64,
    pub c_0: f64,
}

impl Coefficients {
    fn evaluate(&self, bt: f64) -> f64 {
        self.c_m3 / bt.powi(3) + self.c_m2 / bt.powi(2) + self.c_m3_2 / bt.powf(1.5) + self.c_m1 / bt + self.c_m1_2 / bt.sqrt() + self.c_0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRegionBound {
    pub region: Region,
    /// Offset from the carrier, ω − ω₀ for 𝒢₊.
    pub omega: f64,
    /// Upper bound on (B/2π)|𝒢(ω)|².
    pub bound: f64,
    pub coefficients: Coefficients,
}

fn in_band(w: f64) -> Coefficients {
    let wm = 0.5 - w;
    let wp = 0.5 + w;
    let d = 1.0 - 4.0 * w * w;
    let sp = PI.sqrt();
    Coefficients {
        c_m3: 64.0 / (PI * d.powi(6)) * (1.0 + 60.0 * w * w + 240.0 * w.powi(4) + 64.0 * w.powi(6) + d.abs().powi(3)),
        c_m2: 128.0 / (PI * d.abs().powi(3)) * w,
        c_m3_2: 2.0 / (sp * wm.powi(3)) + 2.0 / (sp * wp.powi(3)),
        c_m1: 4.0 / (PI * d * d) * (1.0 + 4.0 * w * w + d.abs()),
        // sin − cos in both terms; the second is printed as sin − sin
        c_m1_2: 2.0 / (sp * wm) + 2.0 / (sp * wp),
        c_0: 1.0,
    }
    .nan_to_inf()
}

fn transition(w: f64, bt: f64) -> Coefficients {
    let wm = (0.5 - w).abs();
    let wp = 0.5 + w;
    let sp = PI.sqrt();
    let a = (bt / PI).sqrt() * wm;
    // printed with √(BT/2) here and √(BT/π) elsewhere; both kept as printed
    let b = (bt / 2.0).sqrt() * wm;
    Coefficients {
        c_m3: 32.0 / (PI * (1.0 + 2.0 * w).powi(6)),
        c_m2: 0.0,
        c_m3_2: (3.0 * (1.0 + 2.0 * a) + 3.0 + PI * a.powi(3)) / (6.0 * sp * wp.powi(3)),
        c_m1: 32.0 / (PI * (1.0 + 2.0 * w).powi(2)),
        c_m1_2: (3.0 * (1.0 + 2.0 * b) + 3.0 + PI * b.powi(3)) / (6.0 * sp * wp),
        c_0: 0.25 + bt.sqrt() * wm / (2.0 * sp) * (1.0 + a) + PI / 72.0 * a.powi(3) * (6.0 + PI * a.powi(3)),
    }
}

fn tail(w: f64) -> Coefficients {
    let d = 1.0 - 4.0 * w * w;
    Coefficients {
        c_m3: 64.0 / (PI * d.powi(6)) * (1.0 + 60.0 * w * w + 240.0 * w.powi(4) + 64.0 * w.powi(6) + d.abs().powi(3)),
        c_m2: 128.0 / (PI * d.abs().powi(3)) * w,
        c_m3_2: 0.0,
        c_m1: 4.0 / (PI * d * d) * (1.0 + 4.0 * w * w + d.abs()),
        c_m1_2: 0.0,
        c_0: 0.0,
    }
    .nan_to_inf()
}

impl Coefficients {
    fn nan_to_inf(self) -> Self {
        let fix = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
        Self {
            c_m3: fix(self.c_m3),
            c_m2: fix(self.c_m2),
            c_m3_2: fix(self.c_m3_2),
            c_m1: fix(self.c_m1),
            c_m1_2: fix(self.c_m1_2),
            c_0: fix(self.c_0),
        }
    }
}

/// Classify |ω|/B against 1/2 with margin REGION_MARGIN·√(π/BT) and bound
/// (B/2π)|𝒢±(ω)|² by maximizing every oscillatory factor.
pub fn region_bound_offset(bandwidth: f64, duration: f64, omega: f64) -> Result<SpectrumRegionBound> {
    if bandwidth <= 0.0 {
        return Err(Error::ZeroChirp);
    }
    let bt = bandwidth * duration;
    let w = omega.abs() / bandwidth;
    let scale = (PI / bt).sqrt();
    let dist = 0.5 - w;
    let make = |region, c: Coefficients| SpectrumRegionBound {
        region,
        omega,
        bound: c.evaluate(bt),
        coefficients: c,
    };
    Ok(if dist >= REGION_MARGIN * scale {
        make(Region::InBand, in_band(w))
    } else if dist.abs() <= scale / REGION_MARGIN {
        make(Region::Transition, transition(w, bt))
    } else if -dist >= REGION_MARGIN * scale {
        make(Region::Tail, tail(w))
    } else {
        let t = make(Region::Transition, transition(w, bt));
        let other = if dist > 0.0 {
            make(Region::InBand, in_band(w))
        } else {
            make(Region::Tail, tail(w))
        };
        let pick = if other.bound > t.bound { other } else { t };
        SpectrumRegionBound {
            region: Region::Ambiguous,
            ..pick
        }
    })
}

/// Region bound for the 𝒢₊ component of `source` at absolute frequency ω.
pub fn region_bound(source: &ChirpSource, omega: f64) -> Result<SpectrumRegionBound> {
    region_bound_offset(source.bandwidth(), source.duration, omega - source.omega0)
}

/// Upper bound on |ℱ(ω)|² from the bounds on both components.
pub fn spectrum_bound(source: &ChirpSource, omega: f64) -> Result<f64> {
    let b = source.bandwidth();
    let plus = region_bound_offset(b, source.duration, omega - source.omega0)?.bound;
    let minus = region_bound_offset(b, source.duration, omega + source.omega0)?.bound;
    let scale = 2.0 * PI / b * source.amplitude * source.amplitude;
    Ok(scale * (plus.sqrt() + minus.sqrt()).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::chirp::chirp_component;

    #[test]
    fn tail_leading_term_at_unit_offset() {
        let r = region_bound_offset(1.0, 1e4, 1.0).unwrap();
        assert_eq!(r.region, Region::Tail);
        assert!((r.coefficients.c_m1 - 32.0 / (9.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn in_band_bound_tends_to_one() {
        let mut last = f64::INFINITY;
        for bt in [1e3, 1e4, 1e6, 1e8, 1e10] {
            let r = region_bound_offset(1.0, bt, 0.0).unwrap();
            assert_eq!(r.region, Region::InBand);
            assert!(r.bound < last);
            last = r.bound;
        }
        assert!((last - 1.0).abs() < 1e-4);
    }

    #[test]
    fn bound_dominates_direct_values() {
        for bt in [1e2, 1e3, 1e4] {
            let t = bt;
            for i in 0..1000 {
                let w = -2.0 + 4.0 * i as f64 / 999.0;
                let g = chirp_component(1.0 / t, t, w, 1.0).unwrap();
                let direct = g.norm_sqr() / (2.0 * PI);
                let r = region_bound_offset(1.0, t, w).unwrap();
                assert!(direct <= r.bound, "BT={bt} ω={w}: {direct} > {} ({:?})", r.bound, r.region);
            }
        }
    }
}
