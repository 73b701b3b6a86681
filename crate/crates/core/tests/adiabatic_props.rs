use nalgebra::DMatrix;
use proptest::prelude::*;

use phi4_core::adiabatic::{bump_two_level, gevrey_bump, propagate, propagate_with, Mode, PropagateOptions};
use phi4_core::TimeDependentHamiltonian;

/// diag(0, g₁, g₁+g₂) + B(s)·V with a fixed real coupling matrix.
fn three_level(g1: f64, g2: f64, v: [f64; 3], duration: f64) -> TimeDependentHamiltonian {
    TimeDependentHamiltonian::real(3, duration, move |s| {
        let b = gevrey_bump(s);
        DMatrix::from_row_slice(
            3,
            3,
            &[0.0, b * v[0], b * v[1], b * v[0], g1, b * v[2], b * v[1], b * v[2], g1 + g2],
        )
    })
    .unwrap()
}

fn max_diff(a: &phi4_core::adiabatic::CMatrix, b: &phi4_core::adiabatic::CMatrix) -> f64 {
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 8,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn propagation_is_unitary(delta in 0.5f64..2.0, beta in 0.1f64..1.0, duration in 5.0f64..60.0) {
        let h = bump_two_level(delta, beta, duration).unwrap();
        for mode in [Mode::Full, Mode::Reduced] {
            let p = propagate(&h, 1, mode).unwrap();
            prop_assert!(p.unitarity_error < 1e-9, "{mode:?}: {}", p.unitarity_error);
        }
    }

    #[test]
    fn reduced_on_whole_space_matches_full(
        g1 in 0.8f64..1.5,
        g2 in 0.8f64..1.5,
        v in prop::array::uniform3(-0.3f64..0.3),
        duration in 5.0f64..30.0,
    ) {
        let h = three_level(g1, g2, v, duration);
        let full = propagate(&h, 3, Mode::Full).unwrap();
        let reduced = propagate(&h, 3, Mode::Reduced).unwrap();
        prop_assert!(reduced.unitarity_error < 1e-9 && full.unitarity_error < 1e-9);
        let d = max_diff(&full.unitary, &reduced.unitary);
        prop_assert!(d < 1e-6, "{d}");
    }

    #[test]
    fn refining_the_frame_samples_leaves_phases(
        g1 in 0.8f64..1.5,
        g2 in 0.8f64..1.5,
        v in prop::array::uniform3(-0.3f64..0.3),
    ) {
        let h = three_level(g1, g2, v, 20.0);
        let coarse = PropagateOptions { trajectory_samples: 1001, rtol: None };
        let fine = PropagateOptions { trajectory_samples: 2001, rtol: None };
        let a = propagate_with(&h, 2, Mode::Reduced, &coarse).unwrap();
        let b = propagate_with(&h, 2, Mode::Reduced, &fine).unwrap();
        for k in 0..2 {
            let dphi = (a.unitary[(k, k)] / b.unitary[(k, k)]).arg();
            prop_assert!(dphi.abs() < 1e-6, "level {k}: {dphi}");
        }
    }
}
