use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;

use phi4_core::passage::{check_parameters, effective_hamiltonian, propagate_sweep, rwa_error_bound, scale_parameters};
use phi4_core::{Frame, TwoLevelSweep};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 10,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn norm_preserved_in_both_frames(bandwidth in 0.02f64..0.3, duration in 50.0f64..400.0, rabi in 0.005f64..0.05) {
        let s = TwoLevelSweep::new(1.0, rabi, bandwidth, duration).unwrap();
        for frame in [Frame::Lab, Frame::Rwa] {
            let r = propagate_sweep(&s, frame).unwrap();
            prop_assert!((r.norm - 1.0).abs() < 1e-9, "{frame:?}: {}", r.norm);
        }
    }

    #[test]
    fn lab_and_rwa_fidelities_within_bound(bandwidth in 0.02f64..0.2, duration in 100.0f64..600.0, frac in 1e-3f64..1e-2) {
        let omega0 = 1.0;
        let rabi = frac * (omega0 - 0.5 * bandwidth);
        let s = TwoLevelSweep::new(omega0, rabi, bandwidth, duration).unwrap();
        let lab = propagate_sweep(&s, Frame::Lab).unwrap().fidelity;
        let rwa = propagate_sweep(&s, Frame::Rwa).unwrap().fidelity;
        let bound = rwa_error_bound(rabi, omega0 - 0.5 * bandwidth, 0.5 * bandwidth, duration);
        prop_assert!((lab - rwa).abs() <= bound, "{lab} vs {rwa}, bound {bound}");
    }

    #[test]
    fn dressed_state_limits(omega in 0.01f64..1.0) {
        let far_below = effective_hamiltonian(omega, -1e6 * omega);
        let far_above = effective_hamiltonian(omega, 1e6 * omega);
        prop_assert!(far_below.theta.abs() < 1e-6);
        prop_assert!((far_above.theta - FRAC_PI_2).abs() < 1e-6);
        // |+⟩ → |e⟩ before, → |g⟩ after
        prop_assert!((far_below.plus[1].abs() - 1.0).abs() < 1e-12);
        prop_assert!((far_above.plus[0].abs() - 1.0).abs() < 1e-12);
        let mid = effective_hamiltonian(omega, 0.0);
        prop_assert!((mid.theta - 0.5 * FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn scaled_parameters_pass_conditions(epsilon in 0.01f64..=0.5) {
        let p = scale_parameters(epsilon).unwrap().prep(1.0, 1.0);
        let report = check_parameters(&p, epsilon, 1.0).unwrap();
        prop_assert!(report.pass, "{report:?}");
    }
}

#[test]
fn adiabatic_fidelity_rises_with_duration() {
    let (bandwidth, rabi) = (0.2, 0.005);
    let t0 = 2000.0;
    let f: Vec<f64> = [1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|k| propagate_sweep(&TwoLevelSweep::new(1.0, rabi, bandwidth, k * t0).unwrap(), Frame::Rwa).unwrap().fidelity)
        .collect();
    assert!(f.windows(2).all(|w| w[1] > w[0]), "{f:?}");
    // Landau-Zener 1 - exp(-πΩ²T/(2B)), up to finite-sweep corrections of order Ω/B
    for (k, fk) in [1.0, 2.0, 4.0, 8.0].iter().zip(&f) {
        let lz = 1.0 - (-std::f64::consts::PI * rabi * rabi * k * t0 / (2.0 * bandwidth)).exp();
        assert!((fk - lz).abs() < 0.05, "T = {}: {fk} vs {lz}", k * t0);
    }
}
