//! Named tolerances shared by solvers and tests.

/// Trapezoid-rule normalization of eigenfunctions.
pub const NORMALIZATION: f64 = 1e-10;
/// Wavefunction magnitude allowed at the box walls.
pub const BOX_TAIL: f64 = 1e-8;
/// Relative tolerance for u_L / u_R integration.
pub const WRONSKIAN_RTOL: f64 = 1e-10;
/// Eigensolver against closed forms, scaled by max(1, |E|).
pub const ENERGY_MATCH: f64 = 1e-6;
/// Minimum error reduction per grid halving.
pub const REFINEMENT_GAIN: f64 = 3.0;
/// Wronskian agreement between sample points and with closed forms.
pub const WRONSKIAN_MATCH: f64 = 1e-8;
/// Large-separation propagator approximation at l = 10 / m_eff.
pub const LARGE_ELL_MATCH: f64 = 1e-6;

/// Default relative tolerance of the adaptive Runge-Kutta integrator.
pub const ODE_RTOL: f64 = 1e-10;
/// Norm drift allowed for unitary propagation.
pub const UNITARITY: f64 = 1e-9;

/// Absolute accuracy of the Fresnel integrals.
pub const FRESNEL_ABS: f64 = 1e-10;
/// Agreement of adjacent Fresnel regimes at their switch points.
pub const FRESNEL_OVERLAP: f64 = 1e-9;
/// Closed-form spectrum against the oversampled FFT, relative, in band.
pub const SPECTRUM_FFT_MATCH: f64 = 1e-3;
/// Classification margin factor on sqrt(pi / BT).
pub const REGION_MARGIN: f64 = 3.0;

/// Relative gap floor for eigenvalue separations in the adiabatic frame.
pub const GAP_FLOOR: f64 = 1e-8;
/// Accuracy of the bump integral.
pub const ETA_QUAD: f64 = 1e-9;

/// Threshold for `entangling_check`.
pub const ENTANGLING: f64 = 1e-6;
/// Leakage after closure tuning.
pub const CLOSURE_LEAKAGE: f64 = 1e-6;

/// Nulled matrix elements in source-profile design.
pub const NULLING: f64 = 1e-10;
/// Poisson table normalization.
pub const POISSON_SUM: f64 = 1e-9;

/// Inter-qubit tunneling amplitude targeted by the layout.
pub const INTER_QUBIT_TUNNELING: f64 = 1e-10;
/// Decision thresholds.
pub const ACCEPT_ABOVE: f64 = 2.0 / 3.0;
pub const REJECT_BELOW: f64 = 1.0 / 3.0;
