use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::UnitsConvention;
use crate::error::{invalid, Error, Result};

/// Shapes of one-dimensional potentials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialKind {
    /// `height` on |x| ≤ width/2, zero elsewhere.
    SquareBarrier { height: f64, width: f64 },
    /// Wells of depth `depths[i]` and width `widths[i]` on either side of a
    /// barrier of width `separation` centred at the origin.
    DoubleSquareWell {
        depths: [f64; 2],
        widths: [f64; 2],
        separation: f64,
    },
    /// `-α² λ(λ-1) / cosh²(αx)`.
    PoschlTeller { alpha: f64, lambda: f64 },
    /// Quasi-exactly solvable double well with barrier parameter `g` and
    /// depth parameter `b`.
    Qes { g: f64, b: f64 },
    /// Piecewise-linear interpolation of samples; constant beyond the ends.
    Tabulated { x: Vec<f64>, v: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    #[serde(flatten)]
    pub kind: PotentialKind,
    pub units: UnitsConvention,
}

/// QES coefficients (V1, V2, V3) of `V1/cosh² + V2/(1+g cosh²) + V3/(1+g cosh²)²`.
pub fn qes_coefficients(g: f64, b: f64) -> (f64, f64, f64) {
    let v1 = g * (g + 2.0) / (4.0 * (1.0 + g) * (1.0 + g));
    let v2 = -4.0 * b * b * (g + 2.0);
    let v3 = 4.0 * b * (b + 1.0) * (1.0 + g);
    (v1, v2, v3)
}

/// Whether the two closed-form QES levels are the two lowest bound states.
///
/// Requires b > 0 and 2 + 3g - 4b(1+g) < 0, i.e. b > (2+3g)/(4(1+g)).
pub fn qes_solvable(g: f64, b: f64) -> bool {
    g > 0.0 && b > 0.0 && 2.0 + 3.0 * g - 4.0 * b * (1.0 + g) < 0.0
}

impl PotentialSpec {
    pub fn new(kind: PotentialKind, units: UnitsConvention) -> Result<Self> {
        let p = Self { kind, units };
        p.validate()?;
        Ok(p)
    }

    pub fn poschl_teller(alpha: f64, lambda: f64, units: UnitsConvention) -> Result<Self> {
        Self::new(PotentialKind::PoschlTeller { alpha, lambda }, units)
    }

    pub fn qes(g: f64, b: f64) -> Result<Self> {
        Self::new(PotentialKind::Qes { g, b }, UnitsConvention::HbarTwoMassOne)
    }

    pub fn square_barrier(height: f64, width: f64, mass: f64) -> Result<Self> {
        Self::new(
            PotentialKind::SquareBarrier { height, width },
            UnitsConvention::Natural { mass },
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.units.validate()?;
        let finite = |v: f64, name: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be finite")))
            }
        };
        match &self.kind {
            PotentialKind::SquareBarrier { height, width } => {
                finite(*height, "height")?;
                if !(*width >= 0.0) {
                    return Err(invalid("barrier width must be non-negative"));
                }
            }
            PotentialKind::DoubleSquareWell {
                depths,
                widths,
                separation,
            } => {
                for d in depths {
                    finite(*d, "depth")?;
                }
                if widths.iter().any(|w| !(*w > 0.0)) || !(*separation >= 0.0) {
                    return Err(invalid("well widths must be positive, separation non-negative"));
                }
            }
            PotentialKind::PoschlTeller { alpha, lambda } => {
                if !(*alpha > 0.0) {
                    return Err(invalid("Poschl-Teller alpha must be positive"));
                }
                if !(*lambda > 1.0) {
                    return Err(invalid(format!(
                        "Poschl-Teller lambda must exceed 1 for an attractive well, got {lambda}"
                    )));
                }
            }
            PotentialKind::Qes { g, b } => {
                if !qes_solvable(*g, *b) {
                    return Err(Error::SolvabilityViolated { b: *b, g: *g });
                }
            }
            PotentialKind::Tabulated { x, v } => {
                if x.len() != v.len() || x.len() < 2 {
                    return Err(invalid("tabulated potential needs matching x, V columns (≥ 2 rows)"));
                }
                if x.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(invalid("tabulated x must be strictly increasing"));
                }
                for val in v {
                    finite(*val, "tabulated V")?;
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::SquareBarrier { height, width } => {
                if x.abs() <= 0.5 * width {
                    *height
                } else {
                    0.0
                }
            }
            PotentialKind::DoubleSquareWell {
                depths,
                widths,
                separation,
            } => {
                let h = 0.5 * separation;
                if x <= -h && x >= -h - widths[0] {
                    -depths[0]
                } else if x >= h && x <= h + widths[1] {
                    -depths[1]
                } else {
                    0.0
                }
            }
            PotentialKind::PoschlTeller { alpha, lambda } => {
                let c = (alpha * x).cosh();
                -alpha * alpha * lambda * (lambda - 1.0) / (c * c)
            }
            PotentialKind::Qes { g, b } => {
                let (v1, v2, v3) = qes_coefficients(*g, *b);
                let c2 = x.cosh().powi(2);
                let q = 1.0 + g * c2;
                v1 / c2 + v2 / q + v3 / (q * q)
            }
            PotentialKind::Tabulated { x: xs, v } => {
                let n = xs.len();
                if x <= xs[0] {
                    return v[0];
                }
                if x >= xs[n - 1] {
                    return v[n - 1];
                }
                let i = xs.partition_point(|&p| p <= x) - 1;
                let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
                v[i] + t * (v[i + 1] - v[i])
            }
        }
    }

    /// Limits of V at -∞ and +∞.
    pub fn asymptotes(&self) -> (f64, f64) {
        match &self.kind {
            PotentialKind::Tabulated { v, .. } => (v[0], v[v.len() - 1]),
            _ => (0.0, 0.0),
        }
    }

    /// Continuum threshold: bound states lie strictly below it.
    pub fn threshold(&self) -> f64 {
        let (a, b) = self.asymptotes();
        a.min(b)
    }

    /// Points where V is discontinuous or kinked.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            PotentialKind::SquareBarrier { width, .. } if *width > 0.0 => {
                vec![-0.5 * width, 0.5 * width]
            }
            PotentialKind::DoubleSquareWell {
                widths, separation, ..
            } => {
                let h = 0.5 * separation;
                vec![-h - widths[0], -h, h, h + widths[1]]
            }
            PotentialKind::Tabulated { x, .. } => x.clone(),
            _ => Vec::new(),
        }
    }

    /// Interval outside which V is within `tol` of its asymptotes.
    pub fn support(&self, tol: f64) -> (f64, f64) {
        match &self.kind {
            PotentialKind::SquareBarrier { width, .. } => (-0.5 * width, 0.5 * width),
            PotentialKind::DoubleSquareWell {
                widths, separation, ..
            } => {
                let h = 0.5 * separation;
                (-h - widths[0], h + widths[1])
            }
            PotentialKind::Tabulated { x, .. } => (x[0], x[x.len() - 1]),
            _ => {
                // symmetric, monotone decaying tails
                let mut r = 1.0;
                while (self.value(r) - self.threshold()).abs() > tol && r < 1e6 {
                    r *= 1.25;
                }
                (-r, r)
            }
        }
    }

    /// Whether V(x) = V(-x).
    pub fn is_symmetric(&self) -> bool {
        match &self.kind {
            PotentialKind::DoubleSquareWell { depths, widths, .. } => {
                depths[0] == depths[1] && widths[0] == widths[1]
            }
            PotentialKind::Tabulated { .. } => false,
            _ => true,
        }
    }

    /// Tabulated potential read from CSV with a header row and columns x, V.
    pub fn from_csv_reader<R: Read>(reader: R, units: UnitsConvention) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() != 2 {
                return Err(Error::Format(format!("row {}: expected 2 columns, got {}", row + 2, rec.len())));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Format(format!("row {}: {e}", row + 2)))
            };
            xs.push(parse(&rec[0])?);
            vs.push(parse(&rec[1])?);
        }
        Self::new(PotentialKind::Tabulated { x: xs, v: vs }, units)
    }

    pub fn from_csv_path(path: &Path, units: UnitsConvention) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::from_csv_reader(f, units)
    }
}
