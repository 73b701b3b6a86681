use proptest::prelude::*;

use phi4_core::schrodinger::{default_grid, green_function, solve_bound_states, wronskian_profile};
use phi4_core::{PotentialSpec, UnitsConvention};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 12,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn low_states_alternate_parity(alpha in 0.5f64..2.0, lambda in 2.3f64..4.0) {
        let p = PotentialSpec::poschl_teller(alpha, lambda, UnitsConvention::HbarMassOne).unwrap();
        let sol = solve_bound_states(&p, &default_grid(&p, 2).unwrap(), 2).unwrap();
        prop_assert!(sol.energies.len() >= 2);
        prop_assert!((sol.parity(0) - 1.0).abs() < 1e-8, "{}", sol.parity(0));
        prop_assert!((sol.parity(1) + 1.0).abs() < 1e-8, "{}", sol.parity(1));
    }

    #[test]
    fn qes_states_alternate_parity(g in 0.005f64..0.05, b in 1.0f64..2.0) {
        let p = PotentialSpec::qes(g, b).unwrap();
        let sol = solve_bound_states(&p, &default_grid(&p, 2).unwrap(), 2).unwrap();
        prop_assert!((sol.parity(0) - 1.0).abs() < 1e-8);
        prop_assert!((sol.parity(1) + 1.0).abs() < 1e-8);
        prop_assert!(sol.overlap(0, 1).abs() < 1e-8);
    }

    #[test]
    fn wronskian_is_position_independent(alpha in 0.5f64..2.0, lambda in 1.5f64..3.5, depth in 0.1f64..3.0) {
        let units = UnitsConvention::HbarMassOne;
        let p = PotentialSpec::poschl_teller(alpha, lambda, units).unwrap();
        // below the ground state -α²(λ-1)²/2
        let z = -0.5 * alpha * alpha * (lambda - 1.0).powi(2) - depth;
        let xs = [-2.0, -0.7, 0.0, 0.9, 2.5].map(|x| x / alpha);
        let w = wronskian_profile(&p, z, (-12.0 / alpha, 12.0 / alpha), &xs).unwrap();
        let scale = w.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for v in &w {
            prop_assert!((v - w[2]).abs() <= 1e-8 * scale, "{w:?}");
        }
    }

    #[test]
    fn green_function_is_symmetric(x1 in -3.0f64..3.0, x2 in -3.0f64..3.0, height in 0.2f64..2.0, z in -2.0f64..-0.1) {
        let p = PotentialSpec::square_barrier(height, 1.5, 1.0).unwrap();
        let a = green_function(&p, z, x1, x2).unwrap();
        let b = green_function(&p, z, x2, x1).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1e-300), "{a} vs {b}");
        prop_assert!(a > 0.0);
    }
}
