use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    X,
    Z,
    Entangling,
}

/// Exported result of one calibration solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateCalibration {
    pub gate: GateKind,
    /// Name of the solved parameter: "tau", "beta" or "z".
    pub parameter: String,
    pub value: f64,
    pub phases: Vec<f64>,
    pub residual: f64,
    pub infidelity: f64,
}

/// Records as a pretty-printed JSON array.
pub fn write_calibrations<W: Write>(records: &[GateCalibration], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, records)?;
    Ok(())
}

pub fn read_calibrations(json: &str) -> Result<Vec<GateCalibration>> {
    Ok(serde_json::from_str(json)?)
}
