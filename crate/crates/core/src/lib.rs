//! Numerical toolkit for a qubit architecture built from classical sources in
//! (1+1)-dimensional scalar field theory.
//!
//! Module map:
//! - [`schrodinger`]: bound states of 1D well potentials, Wronskian Green's
//!   functions and tunneling estimates.
//! - [`passage`]: driven two-level adiabatic passage.
//! - [`spectrum`]: Fresnel integrals and the chirped-source spectrum.
//! - [`adiabatic`]: instantaneous-eigenbasis dynamics and Gevrey schedules.
//! - [`gates`]: X, Z and two-qubit gate calibration.
//! - [`field`]: free-field mode analysis with sources.
//! - [`pipeline`]: circuit compilation, verification and sampling.

// `!(x > 0.0)` is used deliberately so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adiabatic;
pub mod error;
pub mod field;
pub mod gates;
pub mod numerics;
pub mod passage;
pub mod pipeline;
pub mod schrodinger;
pub mod spectrum;
pub mod tolerances;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use schrodinger::{EigenSolution, Grid, PotentialKind, PotentialSpec, UnitsConvention};
pub use passage::{ConditionReport, Frame, PassageResult, TwoLevelSweep};
pub use spectrum::{ChirpSource, Region, SpectrumRegionBound};
pub use adiabatic::{FrameTrajectory, LeakageBound, TimeDependentHamiltonian};
pub use gates::{GateCalibration, TwoQubitSchedule, WellTrajectory};
pub use field::{CreationReport, ModeBasis, SourceProfile};
pub use pipeline::{CompiledFields, GateSpec, LogicalCircuit, ResourceEstimate, ShotResult};
